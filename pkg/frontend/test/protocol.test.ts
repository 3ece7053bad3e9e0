import { describe, expect, it } from "vitest";

import { decodeMessage, encodeMessage, isNfc } from "../src/protocol.js";
import { LineSplitter } from "../src/transport.js";

describe("protocol encoding", () => {
  it("round-trips messages", () => {
    const message = { op: "event", session_id: "s1", event: { kind: "tap", x: 0.25, y: 0.5 } };
    expect(decodeMessage(encodeMessage(message))).toEqual(message);
  });

  it("keeps non-ascii text intact", () => {
    const message = { word: "ҕ ə कि" };
    const wire = encodeMessage(message);
    expect(decodeMessage<{ word: string }>(wire).word).toBe("ҕ ə कि");
  });

  it("reports NFC cleanliness", () => {
    expect(isNfc("café")).toBe(true);
    expect(isNfc("café")).toBe(false);
  });
});

describe("line splitting", () => {
  it("reassembles partial chunks", () => {
    const splitter = new LineSplitter();
    expect(splitter.push('{"a":')).toEqual([]);
    expect(splitter.push('1}\n{"b":2}\n{"c"')).toEqual(['{"a":1}', '{"b":2}']);
    expect(splitter.push(":3}\n")).toEqual(['{"c":3}']);
  });

  it("drops empty lines", () => {
    const splitter = new LineSplitter();
    expect(splitter.push("\n\nx\n")).toEqual(["x"]);
  });
});
