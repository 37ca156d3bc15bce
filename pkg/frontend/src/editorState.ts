// The document-stepping state machine.  States are immutable; every action
// returns a fresh state, and the goal panel always reflects the checked
// boundary (never a stale prefix).

import { Connection, GoalView, ProtocolResponse } from "./protocol.js";
import { nextSentenceAfter, splitSentences } from "./sentences.js";

export interface PanelSnapshot {
  boundary: number;
  goals: GoalView[];
  output: string;
}

export interface EditorState {
  script: string;
  boundary: number; // offset of the end of the checked prefix
  executed: number; // number of sentences executed on the server
  goals: GoalView[];
  output: string;
  status: "ready" | "busy" | "disconnected";
  errorAt: { offset: number; message: string } | null;
  history: PanelSnapshot[];
}

export function initialState(script: string): EditorState {
  return {
    script,
    boundary: 0,
    executed: 0,
    goals: [],
    output: "",
    status: "ready",
    errorAt: null,
    history: [],
  };
}

export function renderGoals(goals: GoalView[]): string {
  if (goals.length === 0) return "";
  const parts = goals.map((g, i) => {
    const hyps = g.hyps.map((h) => `  ${h.name} : ${h.type}`).join("\n");
    const head = i === 0 ? "" : `subgoal ${i + 1} is:\n`;
    if (i === 0) {
      return `${hyps}${hyps ? "\n" : ""}  ============================\n   ${g.concl}`;
    }
    return `${head} ${g.concl}`;
  });
  const count = goals.length === 1 ? "1 subgoal" : `${goals.length} subgoals`;
  return `${count}\n\n${parts.join("\n\n")}`;
}

export async function stepForward(
  state: EditorState,
  conn: Connection,
): Promise<EditorState> {
  const sentence = nextSentenceAfter(state.script, state.boundary);
  if (!sentence) return state;
  let resp: ProtocolResponse;
  try {
    resp = await conn.request("exec", sentence.text);
  } catch {
    return { ...state, status: "disconnected" };
  }
  if (resp.status === "error") {
    return {
      ...state,
      errorAt: {
        offset: sentence.start,
        message: resp.error ? resp.error.message : "error",
      },
    };
  }
  const snapshot: PanelSnapshot = {
    boundary: state.boundary,
    goals: state.goals,
    output: state.output,
  };
  return {
    ...state,
    boundary: sentence.end,
    executed: state.executed + 1,
    goals: resp.goals,
    output: resp.output,
    errorAt: null,
    history: [...state.history, snapshot],
  };
}

export async function stepBack(
  state: EditorState,
  conn: Connection,
): Promise<EditorState> {
  if (state.executed === 0) return state;
  try {
    await conn.request("back", String(state.executed - 1));
  } catch {
    return { ...state, status: "disconnected" };
  }
  const prev = state.history[state.history.length - 1];
  return {
    ...state,
    boundary: prev.boundary,
    executed: state.executed - 1,
    goals: prev.goals,
    output: prev.output,
    errorAt: null,
    history: state.history.slice(0, -1),
  };
}

export async function runToCursor(
  state: EditorState,
  conn: Connection,
  cursor: number,
): Promise<EditorState> {
  let current = state;
  for (;;) {
    const sentence = nextSentenceAfter(current.script, current.boundary);
    if (!sentence || sentence.end > cursor) return current;
    const next = await stepForward(current, conn);
    if (next.errorAt || next.status !== "ready" || next.boundary === current.boundary) {
      return next;
    }
    current = next;
  }
}

/**
 * Query console: Check/Search/SearchPattern/SearchRewrite/Locate/Eval run
 * against the checked prefix in a side-channel session (the prefix is
 * replayed there), so the main document never advances.
 */
export async function queryConsole(
  state: EditorState,
  makeSideChannel: () => Connection,
  input: string,
): Promise<string> {
  const side = makeSideChannel();
  try {
    const prefix = splitSentences(state.script).filter(
      (s) => s.end <= state.boundary,
    );
    for (const s of prefix) {
      const r = await side.request("exec", s.text);
      if (r.status === "error") {
        return `side channel replay failed: ${r.error?.message ?? "error"}`;
      }
    }
    const resp = await side.request("exec", input);
    if (resp.status === "error") {
      return resp.error ? resp.error.message : "error";
    }
    return resp.output;
  } finally {
    side.close();
  }
}
