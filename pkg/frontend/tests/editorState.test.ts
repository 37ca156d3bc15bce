// UI replay acceptance: stepping the example2 script shows the same goal
// panel states the prover produced (recorded in the fixture), and stepping
// back restores earlier panels exactly.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  initialState,
  queryConsole,
  renderGoals,
  runToCursor,
  stepBack,
  stepForward,
} from "../src/editorState.js";
import { MockConnection, ProtocolResponse } from "../src/protocol.js";

const fixturePath = fileURLToPath(
  new URL("./fixtures/example2.json", import.meta.url),
);
const fixture = JSON.parse(readFileSync(fixturePath, "utf8")) as {
  sentences: string[];
  exec: { request: { payload: string }; response: ProtocolResponse }[];
  goals_at: Record<string, ProtocolResponse>;
};

function connection(): MockConnection {
  const exec = new Map<string, ProtocolResponse>();
  for (const r of fixture.exec) exec.set(r.request.payload.trim(), r.response);
  const goals = new Map<number, ProtocolResponse>();
  for (const [k, v] of Object.entries(fixture.goals_at)) {
    goals.set(parseInt(k, 10), v);
  }
  return new MockConnection(exec, goals);
}

const SCRIPT = fixture.sentences.join("\n") + "\n";

describe("example2 replay", () => {
  it("shows the transcript's goal counts at every step", async () => {
    const conn = connection();
    let state = initialState(SCRIPT);
    const seenCounts: number[] = [];
    for (let i = 0; i < fixture.sentences.length; i++) {
      state = await stepForward(state, conn);
      expect(state.errorAt).toBeNull();
      seenCounts.push(state.goals.length);
    }
    // 1 goal -> 1 -> 1 -> 2 subgoals -> 2 -> 1 -> 0 -> defined
    expect(seenCounts).toEqual([1, 1, 1, 2, 2, 1, 0, 0]);
    expect(state.output).toBe("example2 is defined");
  });

  it("panel content equals the protocol's records verbatim", async () => {
    const conn = connection();
    let state = initialState(SCRIPT);
    for (let i = 0; i < fixture.sentences.length; i++) {
      state = await stepForward(state, conn);
      expect(state.goals).toEqual(fixture.exec[i].response.goals);
    }
  });

  it("step_back restores prior panels exactly", async () => {
    const conn = connection();
    let state = initialState(SCRIPT);
    const panels: string[] = [renderGoals(state.goals)];
    for (let i = 0; i < fixture.sentences.length; i++) {
      state = await stepForward(state, conn);
      panels.push(renderGoals(state.goals));
    }
    for (let i = fixture.sentences.length - 1; i >= 0; i--) {
      state = await stepBack(state, conn);
      expect(renderGoals(state.goals)).toBe(panels[i]);
      expect(conn.executed().length).toBe(i);
    }
    expect(state.boundary).toBe(0);
  });

  it("step then back is an identity on the rendered state", async () => {
    const conn = connection();
    let s0 = initialState(SCRIPT);
    s0 = await stepForward(s0, conn);
    s0 = await stepForward(s0, conn);
    const rendered = renderGoals(s0.goals);
    const boundary = s0.boundary;
    let s1 = await stepForward(s0, conn);
    s1 = await stepBack(s1, conn);
    expect(renderGoals(s1.goals)).toBe(rendered);
    expect(s1.boundary).toBe(boundary);
  });

  it("run_to_cursor stops at the cursor", async () => {
    const conn = connection();
    let state = initialState(SCRIPT);
    const idx = SCRIPT.indexOf("split.");
    state = await runToCursor(state, conn, idx + "split.".length);
    expect(conn.executed().length).toBe(4);
    expect(state.goals.length).toBe(2);
  });

  it("a failing sentence leaves the boundary unchanged", async () => {
    const conn = connection();
    let state = initialState("Check zork.\n" + SCRIPT);
    state = await stepForward(state, conn);
    expect(state.errorAt).not.toBeNull();
    expect(state.boundary).toBe(0);
    expect(conn.executed().length).toBe(0);
  });

  it("query console replays the prefix on a side channel", async () => {
    const conn = connection();
    let state = initialState(SCRIPT);
    state = await stepForward(state, conn);
    const answer = await queryConsole(
      state,
      () => connection(),
      fixture.sentences[1], // "Proof." is scripted, acts as the query
    );
    expect(typeof answer).toBe("string");
    // the main document did not advance
    expect(conn.executed().length).toBe(1);
  });
});
