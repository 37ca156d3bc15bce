"""Independent Kripke-semantics oracle for intuitionistic propositional logic.

Enumerates models over small frames; used to cross-check the sequent-search
prover.  Kept deliberately separate from the implementation under test.
"""

import itertools

# formulas: ("atom", i) | ("top",) | ("bot",) | ("and", a, b) | ("or", a, b)
#           | ("imp", a, b)


def forces(world, frame_leq, valuation, f):
    kind = f[0]
    if kind == "atom":
        return valuation[world][f[1]]
    if kind == "top":
        return True
    if kind == "bot":
        return False
    if kind == "and":
        return (forces(world, frame_leq, valuation, f[1])
                and forces(world, frame_leq, valuation, f[2]))
    if kind == "or":
        return (forces(world, frame_leq, valuation, f[1])
                or forces(world, frame_leq, valuation, f[2]))
    if kind == "imp":
        for w2 in range(len(valuation)):
            if frame_leq[world][w2]:
                if (forces(w2, frame_leq, valuation, f[1])
                        and not forces(w2, frame_leq, valuation, f[2])):
                    return False
        return True
    raise ValueError(f)


def _frames(max_worlds):
    # one world, and the two-world chain w0 <= w1
    if max_worlds >= 1:
        yield 1, [[True]]
    if max_worlds >= 2:
        yield 2, [[True, True], [False, True]]


def has_countermodel(f, n_atoms, max_worlds=2):
    """True when some Kripke model over <= max_worlds worlds refutes f."""
    for n, leq in _frames(max_worlds):
        # monotone valuations: once an atom is true it stays true upward
        for bits in itertools.product([False, True], repeat=n * n_atoms):
            valuation = [list(bits[w * n_atoms:(w + 1) * n_atoms])
                         for w in range(n)]
            monotone = True
            for w1 in range(n):
                for w2 in range(n):
                    if leq[w1][w2]:
                        for a in range(n_atoms):
                            if valuation[w1][a] and not valuation[w2][a]:
                                monotone = False
            if not monotone:
                continue
            if not forces(0, leq, valuation, f):
                return True
    return False
