import { test } from "node:test";
import assert from "node:assert/strict";
import { classifyDiff } from "../src/diff.js";
import { buildPairModel, formatRating } from "../src/panes.js";
const DIFF = [
    "diff --git a/f.c b/f.c",
    "index 111..222 100644",
    "--- a/f.c",
    "+++ b/f.c",
    "@@ -1,2 +1,2 @@ int main(void)",
    "-old line",
    "+new line",
    " context",
    "\\ No newline at end of file",
].join("\n");
test("classifies every diff line kind", () => {
    const kinds = classifyDiff(DIFF).map((line) => line.kind);
    assert.deepEqual(kinds, [
        "header",
        "header",
        "header",
        "header",
        "hunk",
        "remove",
        "add",
        "context",
        "header",
    ]);
});
test("file headers are not mistaken for added or removed lines", () => {
    const lines = classifyDiff("+++ b/x\n--- a/x\n+real add\n-real remove\n");
    assert.deepEqual(lines.map((line) => line.kind), ["header", "header", "add", "remove"]);
});
test("line text is preserved verbatim", () => {
    const lines = classifyDiff("+  spaced   content\n");
    assert.equal(lines[0].text, "+  spaced   content");
});
test("empty diff classifies to no lines", () => {
    assert.deepEqual(classifyDiff(""), []);
});
function item(overrides = {}) {
    return {
        id_a: "aaa",
        id_b: "bbb",
        msg_a: "message a",
        msg_b: "message b",
        diff_a: DIFF,
        diff_b: "",
        rm: 0.75,
        rd: 0.7,
        r: 0.72,
        ...overrides,
    };
}
test("pair model exposes both panes and the ratings", () => {
    const model = buildPairModel(item());
    assert.equal(model.left.commitId, "aaa");
    assert.equal(model.right.commitId, "bbb");
    assert.equal(model.left.empty, false);
    assert.equal(model.right.empty, true); // placeholder pane for empty diffs
    assert.deepEqual(model.ratings, { message: 0.75, diff: 0.7, combined: 0.72 });
});
test("ratings format with fixed precision", () => {
    assert.equal(formatRating(0.76), "0.7600");
    assert.equal(formatRating(1), "1.0000");
});
