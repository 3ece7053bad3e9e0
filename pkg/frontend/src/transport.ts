// Transport abstraction over the newline-delimited connection. The protocol
// itself is transport-agnostic; tests drive a TCP socket straight at the
// service, the browser goes through the ws bridge.

export interface Transport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.length > 0);
  }
}

// In-memory transport for view tests: canned request -> response mapping.
export class FakeTransport implements Transport {
  sent: string[] = [];
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  constructor(private respond: (line: string) => string | undefined) {}

  send(line: string): void {
    this.sent.push(line);
    const response = this.respond(line);
    if (response !== undefined) {
      queueMicrotask(() => {
        for (const handler of this.lineHandlers) handler(response);
      });
    }
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    for (const handler of this.closeHandlers) handler();
  }
}
