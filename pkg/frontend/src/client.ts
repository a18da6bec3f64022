// WebSocket session client. One connection per session; disconnecting and
// calling connect() again starts a fresh session.

import type { ClientMessage, HelloMessage, ServerMessage } from "./protocol.js";
import { encodeMessage, parseServerMessage } from "./protocol.js";

export type MessageHandler = (msg: ServerMessage) => void;
export type StatusHandler = (status: "open" | "closed" | "error") => void;

export class SessionClient {
  private ws: WebSocket | null = null;

  constructor(
    private readonly url: string,
    private readonly onMessage: MessageHandler,
    private readonly onStatus: StatusHandler,
  ) {}

  connect(hello: HelloMessage): void {
    this.close();
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.onStatus("open");
      ws.send(encodeMessage(hello));
    };
    ws.onmessage = (ev) => {
      try {
        this.onMessage(parseServerMessage(String(ev.data)));
      } catch (err) {
        this.onMessage({ type: "error", message: String(err) });
      }
    };
    ws.onerror = () => this.onStatus("error");
    ws.onclose = () => {
      if (this.ws === ws) this.ws = null;
      this.onStatus("closed");
    };
  }

  send(msg: ClientMessage): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(encodeMessage(msg));
    }
  }

  get connected(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }

  close(): void {
    if (this.ws) {
      const ws = this.ws;
      this.ws = null;
      try {
        ws.close();
      } catch {
        // already closed
      }
    }
  }
}
