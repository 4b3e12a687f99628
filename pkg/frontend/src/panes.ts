/** Pure view model for one review pair: everything the DOM layer paints,
 * computed without touching the DOM so it stays testable. */

import { ReviewItem } from "./api.js";
import { classifyDiff, DiffLine } from "./diff.js";

export interface PaneModel {
  commitId: string;
  message: string;
  lines: DiffLine[];
  /** true when the commit has no textual diff; the pane shows a placeholder */
  empty: boolean;
}

export interface PairModel {
  left: PaneModel;
  right: PaneModel;
  ratings: { message: number; diff: number; combined: number };
}

export function buildPairModel(item: ReviewItem): PairModel {
  return {
    left: buildPane(item.id_a, item.msg_a, item.diff_a),
    right: buildPane(item.id_b, item.msg_b, item.diff_b),
    ratings: { message: item.rm, diff: item.rd, combined: item.r },
  };
}

function buildPane(commitId: string, message: string, diff: string): PaneModel {
  const lines = classifyDiff(diff);
  return { commitId, message, lines, empty: lines.length === 0 };
}

export function formatRating(value: number): string {
  return value.toFixed(4);
}
