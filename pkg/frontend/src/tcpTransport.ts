// Node-only transport: raw TCP to a local service. Used by the protocol
// tests and by the ws bridge; browsers use WsTransport instead.

import * as net from "net";

import { LineSplitter, Transport } from "./transport.js";

export class TcpTransport implements Transport {
  private socket: net.Socket;
  private splitter = new LineSplitter();
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  private constructor(socket: net.Socket) {
    this.socket = socket;
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => {
      for (const line of this.splitter.push(chunk)) {
        for (const handler of this.lineHandlers) handler(line);
      }
    });
    socket.on("close", () => {
      for (const handler of this.closeHandlers) handler();
    });
  }

  static connect(host: string, port: number): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () => {
        socket.off("error", reject);
        resolve(new TcpTransport(socket));
      });
      socket.once("error", reject);
    });
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
