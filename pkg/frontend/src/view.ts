// On-screen keyboard bound to a KeyboardClient.
//
// Every face, suggestion, and committed character shown here comes verbatim
// from service responses; the view's own logic is limited to geometry
// (locating keys and popup entries from normalized coordinates) and input
// timing (tap vs long-press). Mouse and touch share one code path.

import { KeyboardClient } from "./client.js";
import { KeyModel } from "./protocol.js";

export interface ViewOptions {
  holdThresholdMs?: number;
  clock?: () => number;
}

const HOLD_THRESHOLD_DEFAULT = 300;

interface PressState {
  key: KeyModel;
  nx: number;
  ny: number;
  downAt: number;
  timer: ReturnType<typeof setTimeout> | null;
  popupOpen: boolean;
}

export class KeyboardView {
  readonly keyboardEl: HTMLElement;
  readonly stripEl: HTMLElement;
  readonly committedEl: HTMLElement;
  readonly pendingEl: HTMLElement;
  readonly revertEl: HTMLButtonElement;
  readonly popupEl: HTMLElement;
  readonly bannerEl: HTMLElement;
  readonly controlsEl: HTMLElement;

  private holdThresholdMs: number;
  private clock: () => number;
  private press: PressState | null = null;
  private revertArmed = false;

  constructor(
    readonly container: HTMLElement,
    readonly client: KeyboardClient,
    options: ViewOptions = {},
  ) {
    this.holdThresholdMs = options.holdThresholdMs ?? HOLD_THRESHOLD_DEFAULT;
    this.clock = options.clock ?? (() => Date.now());

    container.classList.add("pb-root");
    this.bannerEl = el("div", "pb-banner");
    this.bannerEl.textContent = "connection lost — restart the service and reload";
    this.bannerEl.style.display = "none";
    this.committedEl = el("div", "pb-committed");
    this.pendingEl = el("span", "pb-pending");
    this.revertEl = el("button", "pb-revert") as HTMLButtonElement;
    this.revertEl.textContent = "↩ revert";
    this.revertEl.style.display = "none";
    this.stripEl = el("div", "pb-strip");
    this.keyboardEl = el("div", "pb-keyboard");
    this.popupEl = el("div", "pb-popup");
    this.popupEl.style.display = "none";
    this.controlsEl = el("div", "pb-controls");

    const textRow = el("div", "pb-textrow");
    textRow.appendChild(this.committedEl);
    textRow.appendChild(this.pendingEl);
    textRow.appendChild(this.revertEl);
    container.appendChild(this.bannerEl);
    container.appendChild(textRow);
    container.appendChild(this.stripEl);
    container.appendChild(this.keyboardEl);
    this.keyboardEl.appendChild(this.popupEl);
    container.appendChild(this.controlsEl);

    this.buildControls();
    this.bindPointerEvents();
  }

  connectionLost(): void {
    this.bannerEl.style.display = "";
  }

  // -- rendering -------------------------------------------------------------

  render(): void {
    const layout = this.client.layout;
    if (!layout) return;
    for (const stale of Array.from(this.keyboardEl.querySelectorAll(".pb-key"))) {
      stale.remove();
    }
    const page = layout.pages[this.client.page];
    for (const key of page.keys) {
      const keyEl = el("div", "pb-key");
      keyEl.dataset.keyId = key.key_id;
      keyEl.style.left = `${key.x * 100}%`;
      keyEl.style.top = `${key.y * 100}%`;
      keyEl.style.width = `${key.w * 100}%`;
      keyEl.style.height = `${key.h * 100}%`;
      if (key.long_press.length > 0) keyEl.classList.add("pb-has-long-press");
      this.keyboardEl.appendChild(keyEl);
    }
    this.refresh();
  }

  refresh(): void {
    const layout = this.client.layout;
    if (!layout) return;
    for (const keyEl of Array.from(
      this.keyboardEl.querySelectorAll<HTMLElement>(".pb-key"),
    )) {
      const keyId = keyEl.dataset.keyId ?? "";
      const face = this.client.faces.get(keyId);
      const model = this.keyById(keyId);
      const text = face ? face.face : "";
      keyEl.textContent = text;
      const inert =
        (!face || (face.face === "" && face.output === "")) &&
        (!model || model.switch_to_page === null);
      keyEl.classList.toggle("pb-blank", inert);
    }
    this.stripEl.textContent = "";
    this.client.suggestions.forEach((suggestion, index) => {
      const slot = el("button", "pb-slot");
      slot.textContent = suggestion.surface;
      slot.dataset.kind = suggestion.kind;
      slot.dataset.index = String(index);
      slot.addEventListener("click", () => {
        void this.sendAndRefresh({ kind: "select_suggestion", index, timestamp: this.clock() });
      });
      this.stripEl.appendChild(slot);
    });
    this.committedEl.textContent = this.client.committed;
    this.pendingEl.textContent = this.client.pending;
    this.revertEl.style.display = this.revertArmed ? "" : "none";
  }

  private buildControls(): void {
    const mk = (label: string, kind: "space" | "backspace" | "commit") => {
      const button = el("button", `pb-ctl pb-ctl-${kind}`);
      button.textContent = label;
      button.addEventListener("click", () => {
        void this.commitLike(kind);
      });
      this.controlsEl.appendChild(button);
    };
    mk("⌫", "backspace");
    mk("space", "space");
    mk("⏎", "commit");
    this.revertEl.addEventListener("click", () => {
      void this.sendAndRefresh({ kind: "revert", timestamp: this.clock() });
    });
  }

  private async commitLike(kind: "space" | "backspace" | "commit"): Promise<void> {
    const pendingBefore = this.client.pending;
    const response = await this.client.sendEvent({ kind, timestamp: this.clock() });
    if (response.ok && (kind === "space" || kind === "commit") && pendingBefore) {
      // Autocorrect detection is a plain string diff: the service appended
      // something other than what was pending.
      const appended = response.committed_delta.append.replace(/ $/, "");
      this.revertArmed = appended !== "" && appended !== pendingBefore;
    } else if (kind === "backspace") {
      this.revertArmed = false;
    }
    this.refresh();
  }

  private async sendAndRefresh(event: Parameters<KeyboardClient["sendEvent"]>[0]): Promise<void> {
    const response = await this.client.sendEvent(event);
    if (response.ok && event.kind !== "revert" && event.kind !== "request_suggestions") {
      this.revertArmed = false;
    }
    if (event.kind === "revert") this.revertArmed = false;
    if (response.ok && this.client.layout && event.kind === "tap") {
      // page switches re-key the whole board
      this.renderIfPageChanged();
    }
    this.refresh();
  }

  private lastRenderedPage = 0;

  private renderIfPageChanged(): void {
    if (this.client.page !== this.lastRenderedPage) {
      this.lastRenderedPage = this.client.page;
      this.render();
    }
  }

  // -- geometry ---------------------------------------------------------------

  private keyById(keyId: string): KeyModel | undefined {
    const layout = this.client.layout;
    if (!layout) return undefined;
    return layout.pages[this.client.page].keys.find((k) => k.key_id === keyId);
  }

  toNormalized(clientX: number, clientY: number): { nx: number; ny: number } {
    const rect = this.keyboardEl.getBoundingClientRect();
    const nx = rect.width > 0 ? (clientX - rect.left) / rect.width : 0;
    const ny = rect.height > 0 ? (clientY - rect.top) / rect.height : 0;
    return { nx: clamp(nx), ny: clamp(ny) };
  }

  keyAt(nx: number, ny: number): KeyModel | undefined {
    const layout = this.client.layout;
    if (!layout) return undefined;
    return layout.pages[this.client.page].keys.find(
      (k) => nx >= k.x && nx < k.x + k.w && ny >= k.y && ny < k.y + k.h,
    );
  }

  private isInert(key: KeyModel): boolean {
    if (key.switch_to_page !== null) return false;
    const face = this.client.faces.get(key.key_id);
    return !face || (face.face === "" && face.output === "");
  }

  // -- pointer handling ---------------------------------------------------------

  private bindPointerEvents(): void {
    const down = (clientX: number, clientY: number) => this.onDown(clientX, clientY);
    const up = (clientX: number, clientY: number) => void this.onUp(clientX, clientY);
    this.keyboardEl.addEventListener("mousedown", (e) => down(e.clientX, e.clientY));
    this.keyboardEl.addEventListener("mouseup", (e) => up(e.clientX, e.clientY));
    this.keyboardEl.addEventListener("touchstart", (e) => {
      const touch = e.touches[0];
      if (touch) down(touch.clientX, touch.clientY);
    });
    this.keyboardEl.addEventListener("touchend", (e) => {
      const touch = e.changedTouches[0];
      if (touch) up(touch.clientX, touch.clientY);
    });
  }

  private onDown(clientX: number, clientY: number): void {
    const { nx, ny } = this.toNormalized(clientX, clientY);
    const key = this.keyAt(nx, ny);
    if (!key || this.isInert(key)) return;
    const press: PressState = {
      key,
      nx,
      ny,
      downAt: this.clock(),
      timer: null,
      popupOpen: false,
    };
    if (key.long_press.length > 0) {
      press.timer = setTimeout(() => this.openPopup(press), this.holdThresholdMs);
    }
    this.press = press;
  }

  private openPopup(press: PressState): void {
    press.popupOpen = true;
    this.popupEl.textContent = "";
    // entries keep the layout's long-press order
    for (const entry of press.key.long_press) {
      const entryEl = el("span", "pb-popup-entry");
      entryEl.textContent = entry;
      this.popupEl.appendChild(entryEl);
    }
    const geometry = this.popupGeometry(press.key);
    this.popupEl.style.left = `${geometry.left * 100}%`;
    this.popupEl.style.top = `${geometry.top * 100}%`;
    this.popupEl.style.width = `${geometry.width * 100}%`;
    this.popupEl.style.height = `${geometry.height * 100}%`;
    this.popupEl.style.display = "";
  }

  popupGeometry(key: KeyModel): { left: number; top: number; width: number; height: number } {
    const width = Math.min(1, key.w * key.long_press.length);
    const left = clamp(key.x + key.w / 2 - width / 2, 0, 1 - width);
    const top = Math.max(0, key.y - key.h);
    return { left, top, width, height: key.h };
  }

  popupIndexAt(nx: number, ny: number, key: KeyModel): number | null {
    const geometry = this.popupGeometry(key);
    if (
      nx < geometry.left ||
      nx >= geometry.left + geometry.width ||
      ny < geometry.top ||
      ny >= geometry.top + geometry.height
    ) {
      return null;
    }
    const per = geometry.width / key.long_press.length;
    const index = Math.floor((nx - geometry.left) / per);
    return Math.max(0, Math.min(key.long_press.length - 1, index));
  }

  private async onUp(clientX: number, clientY: number): Promise<void> {
    const press = this.press;
    this.press = null;
    if (!press) return;
    if (press.timer !== null) clearTimeout(press.timer);
    const { nx, ny } = this.toNormalized(clientX, clientY);
    const held = this.clock() - press.downAt;

    if (press.popupOpen || held >= this.holdThresholdMs) {
      this.popupEl.style.display = "none";
      if (!press.popupOpen && press.key.long_press.length === 0) return;
      const index = this.popupIndexAt(nx, ny, press.key);
      if (index === null) return; // released outside: no event
      await this.sendAndRefresh({
        kind: "long_press_select",
        x: press.key.x + press.key.w / 2,
        y: press.key.y + press.key.h / 2,
        index,
        timestamp: this.clock(),
      });
      return;
    }
    await this.sendAndRefresh({
      kind: "tap",
      x: press.nx,
      y: press.ny,
      timestamp: this.clock(),
    });
  }
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function clamp(value: number, lo = 0, hi = 1): number {
  return Math.min(hi, Math.max(lo, value));
}
