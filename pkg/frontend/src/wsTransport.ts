// Browser transport: WebSocket to the local ws-tcp bridge (bridge.mjs),
// which forwards each text frame as one protocol line.

import { LineSplitter, Transport } from "./transport.js";

export class WsTransport implements Transport {
  private splitter = new LineSplitter();
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  private constructor(private socket: WebSocket) {
    socket.addEventListener("message", (event) => {
      const text = typeof event.data === "string" ? event.data : "";
      for (const line of this.splitter.push(text.endsWith("\n") ? text : text + "\n")) {
        for (const handler of this.lineHandlers) handler(line);
      }
    });
    socket.addEventListener("close", () => {
      for (const handler of this.closeHandlers) handler();
    });
  }

  static connect(url: string): Promise<WsTransport> {
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(url);
      socket.addEventListener("open", () => resolve(new WsTransport(socket)));
      socket.addEventListener("error", () => reject(new Error(`cannot reach ${url}`)));
    });
  }

  send(line: string): void {
    this.socket.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}
