/** DOM painting for the review screen. Any rendering failure falls back to
 * the raw item text so a reviewer is never blocked by a display bug. */
import { buildPairModel, formatRating } from "./panes.js";
export function renderPair(root, item) {
    try {
        paintPair(root, item);
    }
    catch (error) {
        console.error("render failed, falling back to raw text", error);
        root.replaceChildren();
        const fallback = document.createElement("pre");
        fallback.className = "raw-fallback";
        fallback.textContent =
            `${item.id_a}\n${item.msg_a}\n\n${item.diff_a}\n\n` +
                `${item.id_b}\n${item.msg_b}\n\n${item.diff_b}`;
        root.appendChild(fallback);
    }
}
function paintPair(root, item) {
    const model = buildPairModel(item);
    root.replaceChildren();
    const ratings = document.createElement("div");
    ratings.className = "ratings";
    ratings.textContent =
        `message ${formatRating(model.ratings.message)}  ` +
            `diff ${formatRating(model.ratings.diff)}  ` +
            `combined ${formatRating(model.ratings.combined)}`;
    root.appendChild(ratings);
    const panes = document.createElement("div");
    panes.className = "panes";
    panes.appendChild(paintPane(model.left, "pane-left"));
    panes.appendChild(paintPane(model.right, "pane-right"));
    root.appendChild(panes);
}
function paintPane(pane, extraClass) {
    const container = document.createElement("section");
    container.className = `pane ${extraClass}`;
    const commit = document.createElement("h2");
    commit.textContent = pane.commitId;
    container.appendChild(commit);
    const message = document.createElement("pre");
    message.className = "message";
    message.textContent = pane.message;
    container.appendChild(message);
    const diff = document.createElement("pre");
    diff.className = "diff";
    if (pane.empty) {
        diff.classList.add("placeholder");
        diff.textContent = "(no textual diff)";
    }
    else {
        for (const line of pane.lines) {
            const span = document.createElement("span");
            span.className = `line line-${line.kind}`;
            span.textContent = line.text + "\n";
            diff.appendChild(span);
        }
    }
    container.appendChild(diff);
    return container;
}
export function renderEmpty(root) {
    root.replaceChildren();
    const done = document.createElement("div");
    done.className = "all-done";
    done.textContent = "Queue empty — nothing left to review.";
    root.appendChild(done);
}
export function renderStatus(element, position, length) {
    element.textContent =
        length === 0 ? "0 pending" : `${Math.min(position, length)} / ${length} pending`;
}
export function renderBanner(element, text) {
    element.textContent = text;
    element.classList.toggle("hidden", text === "");
}
