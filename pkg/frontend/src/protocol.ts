// Session protocol types and transports.  One JSON record per message; the
// server guarantees in-order processing within a connection.

export interface Hyp {
  name: string;
  type: string;
}

export interface GoalView {
  hyps: Hyp[];
  concl: string;
}

export interface ProtocolError {
  line: number;
  col: number;
  message: string;
}

export interface ProtocolResponse {
  id: number;
  status: "ok" | "error";
  goals: GoalView[];
  output: string;
  error: ProtocolError | null;
}

export type Op = "exec" | "back" | "goals" | "env" | "about";

export interface Connection {
  request(op: Op, payload: string): Promise<ProtocolResponse>;
  close(): void;
}

/** WebSocket transport; keeps at most one request in flight. */
export class WsConnection implements Connection {
  private ws: WebSocket;
  private nextId = 1;
  private queue: Promise<unknown> = Promise.resolve();
  private pending: ((resp: ProtocolResponse) => void) | null = null;
  readonly ready: Promise<void>;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ready = new Promise((resolve, reject) => {
      this.ws.onopen = () => resolve();
      this.ws.onerror = () => reject(new Error("connection failed"));
    });
    this.ws.onmessage = (ev) => {
      const resp = JSON.parse(String(ev.data)) as ProtocolResponse;
      const waiter = this.pending;
      this.pending = null;
      if (waiter) waiter(resp);
    };
  }

  request(op: Op, payload: string): Promise<ProtocolResponse> {
    const run = async (): Promise<ProtocolResponse> => {
      await this.ready;
      const id = this.nextId++;
      const record = JSON.stringify({ id, op, payload });
      return new Promise<ProtocolResponse>((resolve) => {
        this.pending = resolve;
        this.ws.send(record);
      });
    };
    const result = this.queue.then(run);
    this.queue = result.catch(() => undefined);
    return result as Promise<ProtocolResponse>;
  }

  close(): void {
    this.ws.close();
  }
}

/** Scripted transport used by the tests: replays recorded responses. */
export class MockConnection implements Connection {
  private execLog: string[] = [];
  constructor(
    private execResponses: Map<string, ProtocolResponse>,
    private goalsAt: Map<number, ProtocolResponse>,
  ) {}

  async request(op: Op, payload: string): Promise<ProtocolResponse> {
    if (op === "exec") {
      const resp = this.execResponses.get(payload.trim());
      if (!resp) {
        return {
          id: -1,
          status: "error",
          goals: [],
          output: "",
          error: { line: 1, col: 1, message: `unscripted sentence: ${payload}` },
        };
      }
      if (resp.status === "ok") this.execLog.push(payload.trim());
      return resp;
    }
    if (op === "back") {
      const n = parseInt(payload || "0", 10);
      this.execLog = this.execLog.slice(0, n);
      const resp = this.goalsAt.get(n);
      if (!resp) throw new Error(`no goals fixture for prefix ${n}`);
      return { ...resp, output: "" };
    }
    if (op === "goals") {
      const resp = this.goalsAt.get(this.execLog.length);
      if (!resp) throw new Error("no goals fixture");
      return resp;
    }
    return { id: -1, status: "ok", goals: [], output: "", error: null };
  }

  executed(): readonly string[] {
    return this.execLog;
  }

  close(): void {}
}
