// DOM wiring for the proof IDE: script editor, step controls, goal panel,
// query console.

import {
  EditorState,
  initialState,
  queryConsole,
  renderGoals,
  runToCursor,
  stepBack,
  stepForward,
} from "./editorState.js";
import { Connection, WsConnection } from "./protocol.js";

const EXAMPLE = `Theorem example2 : forall a b:Prop, a /\\ b -> b /\\ a.
Proof.
intros a b H.
split.
elim H; intros H0 H1.
exact H1.
intuition.
Qed.
`;

function wsUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/ws`;
}

function main(): void {
  const editor = document.getElementById("script") as HTMLTextAreaElement;
  const goalPanel = document.getElementById("goals") as HTMLPreElement;
  const outputPanel = document.getElementById("output") as HTMLPreElement;
  const statusLine = document.getElementById("status") as HTMLElement;
  const checkedMarker = document.getElementById("checked") as HTMLPreElement;
  const queryInput = document.getElementById("query") as HTMLInputElement;
  const queryOut = document.getElementById("query-output") as HTMLPreElement;

  editor.value = EXAMPLE;
  let conn: Connection = new WsConnection(wsUrl());
  let state: EditorState = initialState(editor.value);

  function render(): void {
    goalPanel.textContent = renderGoals(state.goals);
    outputPanel.textContent = state.errorAt
      ? `Error: ${state.errorAt.message}`
      : state.output;
    checkedMarker.textContent = state.script.slice(0, state.boundary);
    statusLine.textContent =
      state.status === "disconnected" ? "disconnected" : "connected";
  }

  function syncScript(): void {
    if (editor.value !== state.script) {
      // edits below the boundary reset the session lazily on next step
      state = { ...state, script: editor.value };
      if (state.boundary > editor.value.length) {
        state = { ...state, boundary: 0, executed: 0, goals: [], history: [] };
        void conn.request("back", "0");
      }
    }
  }

  async function guard(fn: () => Promise<EditorState>): Promise<void> {
    syncScript();
    state = { ...state, status: "busy" };
    render();
    try {
      state = await fn();
      if (state.status === "busy") state = { ...state, status: "ready" };
    } catch {
      state = { ...state, status: "disconnected" };
    }
    render();
  }

  document.getElementById("step")!.addEventListener("click", () => {
    void guard(() => stepForward(state, conn));
  });
  document.getElementById("back")!.addEventListener("click", () => {
    void guard(() => stepBack(state, conn));
  });
  document.getElementById("to-cursor")!.addEventListener("click", () => {
    void guard(() => runToCursor(state, conn, editor.selectionStart));
  });
  queryInput.addEventListener("keydown", (ev) => {
    if (ev.key !== "Enter") return;
    const input = queryInput.value.trim();
    if (!input) return;
    void queryConsole(state, () => new WsConnection(wsUrl()), input).then(
      (text) => {
        queryOut.textContent = text;
      },
    );
  });

  render();
}

main();
