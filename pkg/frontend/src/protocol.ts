// polyboard session service protocol v1: one JSON object per line, request
// and response strictly alternating per session.

export type EventKind =
  | "tap"
  | "long_press_select"
  | "backspace"
  | "space"
  | "commit"
  | "revert"
  | "select_suggestion"
  | "request_suggestions"
  | "set_languages";

export interface SessionEvent {
  kind: EventKind;
  x?: number;
  y?: number;
  timestamp?: number;
  index?: number;
  languages?: string[];
}

export interface SuggestionMsg {
  surface: string;
  score: number;
  kind: string;
}

export interface KeyModel {
  key_id: string;
  x: number;
  y: number;
  w: number;
  h: number;
  face: string;
  base_output: string;
  long_press: string[];
  switch_to_page: number | null;
}

export interface LayoutModel {
  layout_id: string;
  language_tag: string;
  script: string;
  pages: { keys: KeyModel[] }[];
}

export interface KeyFace {
  output: string;
  face: string;
}

export interface ErrorBody {
  code: string;
  message: string;
}

export interface HelloResponse {
  ok: boolean;
  protocol: string;
  languages: string[];
  error?: ErrorBody;
}

export interface OpenSessionResponse {
  ok: boolean;
  session_id: string;
  protocol: string;
  languages: string[];
  layout: LayoutModel;
  key_faces: Record<string, KeyFace>;
  suggestions: SuggestionMsg[];
  error?: ErrorBody;
}

export interface EventResponse {
  ok: boolean;
  suggestions: SuggestionMsg[];
  committed: string;
  committed_delta: { retract: number; append: string };
  pending: string;
  page: number;
  key_faces_delta: Record<string, KeyFace>;
  error?: ErrorBody;
}

export function encodeMessage(message: unknown): string {
  return JSON.stringify(message);
}

export function decodeMessage<T>(line: string): T {
  return JSON.parse(line) as T;
}

// All user-visible text must round-trip NFC-clean.
export function isNfc(text: string): boolean {
  return text.normalize("NFC") === text;
}
