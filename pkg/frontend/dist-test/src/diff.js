/** Classify unified-diff lines for display coloring. Pure string work; the
 * server sends diffs verbatim and nothing here alters the text. */
const HEADER_PREFIXES = [
    "+++",
    "---",
    "diff ",
    "index ",
    "new file mode",
    "deleted file mode",
    "old mode",
    "new mode",
    "similarity index",
    "Binary files",
    "\\ No newline",
];
export function classifyDiff(text) {
    if (text === "") {
        return [];
    }
    const lines = text.split("\n");
    if (lines.length > 0 && lines[lines.length - 1] === "") {
        lines.pop();
    }
    return lines.map((line) => ({ kind: kindOf(line), text: line }));
}
function kindOf(line) {
    for (const prefix of HEADER_PREFIXES) {
        if (line.startsWith(prefix)) {
            return "header";
        }
    }
    if (line.startsWith("@@")) {
        return "hunk";
    }
    if (line.startsWith("+")) {
        return "add";
    }
    if (line.startsWith("-")) {
        return "remove";
    }
    return "context";
}
