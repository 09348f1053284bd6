import { getHealth } from "./api";
import { DEFAULT_ENDPOINT, loadEndpoint, saveEndpoint } from "./config";

export async function initOptionsPage(doc: Document): Promise<void> {
  const input = doc.getElementById("endpoint") as HTMLInputElement;
  const save = doc.getElementById("save") as HTMLButtonElement;
  const status = doc.getElementById("status") as HTMLElement;

  input.value = await loadEndpoint();
  input.placeholder = DEFAULT_ENDPOINT;

  save.addEventListener("click", async () => {
    const endpoint = input.value.trim() || DEFAULT_ENDPOINT;
    await saveEndpoint(endpoint);
    try {
      const health = await getHealth(endpoint);
      status.textContent = health.ready ? "saved; service ready" : "saved; service not ready";
    } catch {
      status.textContent = "saved; service unreachable";
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("endpoint")) {
  void initOptionsPage(document);
}
