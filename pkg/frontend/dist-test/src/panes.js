/** Pure view model for one review pair: everything the DOM layer paints,
 * computed without touching the DOM so it stays testable. */
import { classifyDiff } from "./diff.js";
export function buildPairModel(item) {
    return {
        left: buildPane(item.id_a, item.msg_a, item.diff_a),
        right: buildPane(item.id_b, item.msg_b, item.diff_b),
        ratings: { message: item.rm, diff: item.rd, combined: item.r },
    };
}
function buildPane(commitId, message, diff) {
    const lines = classifyDiff(diff);
    return { commitId, message, lines, empty: lines.length === 0 };
}
export function formatRating(value) {
    return value.toFixed(4);
}
