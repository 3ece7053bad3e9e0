// Demo entry point: connect to the ws-tcp bridge, open a session, render.

import { KeyboardClient } from "./client.js";
import { KeyboardView } from "./view.js";
import { WsTransport } from "./wsTransport.js";

const BRIDGE_URL = "ws://127.0.0.1:9152";

async function start(): Promise<void> {
  const root = document.getElementById("keyboard-root");
  const picker = document.getElementById("language-picker") as HTMLSelectElement | null;
  const status = document.getElementById("status");
  if (!root || !picker || !status) throw new Error("demo page markup missing");

  let client: KeyboardClient | null = null;
  let view: KeyboardView | null = null;

  async function connect(languages: string[]): Promise<void> {
    if (client) await client.close().catch(() => undefined);
    root!.textContent = "";
    const transport = await WsTransport.connect(BRIDGE_URL);
    client = new KeyboardClient(transport);
    transport.onClose(() => view?.connectionLost());
    const hello = await client.hello();
    if (picker!.options.length === 0) {
      for (const tag of hello.languages) {
        const option = document.createElement("option");
        option.value = tag;
        option.textContent = tag;
        picker!.appendChild(option);
      }
      picker!.value = languages[0];
    }
    await client.openSession(languages);
    view = new KeyboardView(root!, client);
    view.render();
    status!.textContent = `session ${client.sessionId}: ${client.languages.join("+")}`;
  }

  picker.addEventListener("change", () => {
    void connect([picker.value]).catch((err) => {
      status.textContent = String(err);
    });
  });

  await connect(["en"]);
}

start().catch((err) => {
  const status = document.getElementById("status");
  if (status) status.textContent = `${err} — is the service and bridge running?`;
});
