// KeyboardClient: drives one typing session over the v1 line protocol.
//
// The client is deliberately dumb: it never invents a face, a suggestion, or
// a correction. Everything it exposes is merged verbatim from service
// responses, and every outgoing event is recorded for protocol tests.

import {
  decodeMessage,
  encodeMessage,
  EventResponse,
  HelloResponse,
  KeyFace,
  LayoutModel,
  OpenSessionResponse,
  SessionEvent,
  SuggestionMsg,
} from "./protocol.js";
import { Transport } from "./transport.js";

interface Pending {
  resolve: (line: string) => void;
  reject: (err: Error) => void;
}

export class KeyboardClient {
  readonly eventLog: SessionEvent[] = [];

  sessionId = "";
  languages: string[] = [];
  layout: LayoutModel | null = null;
  faces = new Map<string, KeyFace>();
  suggestions: SuggestionMsg[] = [];
  committed = "";
  pending = "";
  page = 0;
  closed = false;

  private queue: Pending[] = [];
  private waiting: { message: unknown; pending: Pending }[] = [];
  private inFlight = false;

  constructor(private transport: Transport, readonly clock: () => number = Date.now) {
    transport.onLine((line) => this.onLine(line));
    transport.onClose(() => {
      this.closed = true;
      const error = new Error("connection closed");
      for (const pending of this.queue.splice(0)) pending.reject(error);
      for (const waiting of this.waiting.splice(0)) waiting.pending.reject(error);
    });
  }

  private onLine(line: string): void {
    const pending = this.queue.shift();
    if (pending) pending.resolve(line);
    this.inFlight = this.queue.length > 0;
    this.pump();
  }

  private pump(): void {
    // One in-flight request per session; the rest wait their turn.
    if (this.inFlight) return;
    const next = this.waiting.shift();
    if (!next) return;
    this.inFlight = true;
    this.queue.push(next.pending);
    this.transport.send(encodeMessage(next.message));
  }

  private request<T>(message: unknown): Promise<T> {
    return new Promise<T>((resolve, reject) => {
      this.waiting.push({
        message,
        pending: {
          resolve: (line) => resolve(decodeMessage<T>(line)),
          reject,
        },
      });
      this.pump();
    });
  }

  async hello(): Promise<HelloResponse> {
    return this.request<HelloResponse>({ op: "hello" });
  }

  async openSession(
    languages: string[],
    layout?: string,
    sessionId?: string,
  ): Promise<OpenSessionResponse> {
    const message: Record<string, unknown> = { op: "open_session", languages };
    if (layout) message.layout = layout;
    if (sessionId) message.session_id = sessionId;
    const response = await this.request<OpenSessionResponse>(message);
    if (!response.ok) {
      throw new Error(response.error ? response.error.message : "open_session failed");
    }
    this.sessionId = response.session_id;
    this.languages = response.languages;
    this.layout = response.layout;
    this.faces = new Map(Object.entries(response.key_faces));
    this.suggestions = response.suggestions;
    this.committed = "";
    this.pending = "";
    this.page = 0;
    return response;
  }

  async sendEvent(event: SessionEvent): Promise<EventResponse> {
    this.eventLog.push(event);
    const response = await this.request<EventResponse>({
      op: "event",
      session_id: this.sessionId,
      event,
    });
    if (!response.ok) return response;
    if (response.page !== this.page) {
      this.page = response.page;
      this.faces = new Map(Object.entries(response.key_faces_delta));
    } else {
      for (const [keyId, face] of Object.entries(response.key_faces_delta)) {
        this.faces.set(keyId, face);
      }
    }
    this.suggestions = response.suggestions;
    this.committed = response.committed;
    this.pending = response.pending;
    return response;
  }

  async setLanguages(languages: string[]): Promise<void> {
    this.eventLog.push({ kind: "set_languages", languages });
    const response = await this.request<OpenSessionResponse>({
      op: "event",
      session_id: this.sessionId,
      event: { kind: "set_languages", languages },
    });
    if (!response.ok) {
      throw new Error(response.error ? response.error.message : "set_languages failed");
    }
    this.languages = response.languages;
    this.layout = response.layout;
    this.faces = new Map(Object.entries(response.key_faces));
    this.page = 0;
  }

  async close(): Promise<void> {
    if (this.sessionId && !this.closed) {
      await this.request({ op: "close_session", session_id: this.sessionId });
    }
    this.transport.close();
  }
}
