/** Bootstrap: wire the queue to the DOM and the keyboard.
 *
 * Keyboard-first: `s` similar, `d` dissimilar, arrows move through the
 * queue. A failed request leaves the queue untouched and shows a banner;
 * the same keystroke simply retries.
 */

import { ReviewApi, FetchLike } from "./api.js";
import { ReviewQueue } from "./queue.js";
import { renderBanner, renderEmpty, renderPair, renderStatus } from "./dom.js";

const api = new ReviewApi(window.fetch.bind(window) as FetchLike);
const queue = new ReviewQueue(api);

const root = document.getElementById("pair")!;
const status = document.getElementById("status")!;
const banner = document.getElementById("banner")!;

function repaint(): void {
  renderStatus(status, queue.position, queue.length);
  const item = queue.current();
  if (item === null) {
    renderEmpty(root);
  } else {
    renderPair(root, item);
  }
}

async function sync(): Promise<void> {
  try {
    await queue.refresh();
    renderBanner(banner, "");
  } catch (error) {
    renderBanner(banner, `cannot reach the review service — ${String(error)}`);
  }
  repaint();
}

async function decide(verdict: "similar" | "dissimilar"): Promise<void> {
  try {
    const outcome = await queue.submit(verdict);
    if (outcome === "conflict") {
      renderBanner(banner, "pair was already decided elsewhere; queue refreshed");
    } else {
      renderBanner(banner, "");
    }
  } catch (error) {
    renderBanner(banner, `verdict not recorded — ${String(error)} — press again to retry`);
  }
  repaint();
}

document.addEventListener("keydown", (event) => {
  if (event.target instanceof HTMLInputElement) {
    return;
  }
  switch (event.key) {
    case "s":
      void decide("similar");
      break;
    case "d":
      void decide("dissimilar");
      break;
    case "ArrowRight":
      queue.next();
      repaint();
      break;
    case "ArrowLeft":
      queue.previous();
      repaint();
      break;
    case "r":
      void sync();
      break;
  }
});

document.getElementById("btn-similar")?.addEventListener("click", () => void decide("similar"));
document.getElementById("btn-dissimilar")?.addEventListener("click", () => void decide("dissimilar"));
document.getElementById("btn-refresh")?.addEventListener("click", () => void sync());

void sync();
