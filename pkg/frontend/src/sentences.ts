// Sentence layout: '.'-terminated, with (* ... *) comments (nesting) and
// "..." strings skipped.  The checked-prefix boundary always sits at a
// sentence end.

export interface Sentence {
  text: string;
  start: number;
  end: number; // offset one past the terminating '.'
}

export function splitSentences(src: string): Sentence[] {
  const out: Sentence[] = [];
  let i = 0;
  let start = -1;
  let commentDepth = 0;
  let inString = false;
  const n = src.length;
  while (i < n) {
    const c = src[i];
    if (inString) {
      if (c === '"') inString = false;
      i++;
      continue;
    }
    if (commentDepth > 0) {
      if (src.startsWith("(*", i)) {
        commentDepth++;
        i += 2;
      } else if (src.startsWith("*)", i)) {
        commentDepth--;
        i += 2;
      } else {
        i++;
      }
      continue;
    }
    if (src.startsWith("(*", i)) {
      commentDepth++;
      i += 2;
      continue;
    }
    if (c === '"') {
      inString = true;
      if (start < 0) start = i;
      i++;
      continue;
    }
    if (/\s/.test(c)) {
      i++;
      continue;
    }
    if (start < 0) start = i;
    if (c === ".") {
      out.push({ text: src.slice(start, i + 1), start, end: i + 1 });
      start = -1;
    }
    i++;
  }
  return out;
}

/** The first sentence beginning at or after the boundary offset. */
export function nextSentenceAfter(src: string, boundary: number): Sentence | null {
  for (const s of splitSentences(src)) {
    if (s.start >= boundary) return s;
  }
  return null;
}

/** Number of whole sentences ending at or before the given offset. */
export function sentencesBefore(src: string, offset: number): Sentence[] {
  return splitSentences(src).filter((s) => s.end <= offset);
}
