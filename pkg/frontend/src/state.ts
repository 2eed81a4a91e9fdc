/** Session state and decision-rule tab gating. */

import type { AnalyzeResponse, MethodTag } from "./types";
import type { CellError } from "./csv";

export const TAB_ORDER: MethodTag[] = ["bayes", "expanded-bca", "t", "adjusted-t", "percentile", "bca"];

export const METHOD_NAMES: Record<MethodTag, string> = {
  bayes: "Empirical Bayes",
  "expanded-bca": "Expanded BCa",
  t: "t distribution",
  "adjusted-t": "Truncation-adjusted t",
  percentile: "Percentile bootstrap",
  bca: "BCa bootstrap",
};

export interface SessionState {
  header: string[] | null;
  grid: string[][];
  errors: CellError[];
  omittedItem: number | null;
  itemOrder: number[] | null;
  analysis: AnalyzeResponse | null;
  activeTab: MethodTag | null;
  activeScale: string;
  requestToken: number;
  undoStack: string[][][];
}

export function freshSession(): SessionState {
  return {
    header: null,
    grid: [],
    errors: [],
    omittedItem: null,
    itemOrder: null,
    analysis: null,
    activeTab: null,
    activeScale: "acceptability",
    requestToken: 0,
    undoStack: [],
  };
}

/** Tab gating comes from plan.recommended alone; everything else is display. */
export function enabledTabs(analysis: AnalyzeResponse | null): Set<MethodTag> {
  if (!analysis) return new Set();
  return new Set(analysis.plan.recommended);
}

export function availableTabs(analysis: AnalyzeResponse): MethodTag[] {
  const computed = new Set(analysis.intervals.map((entry) => entry.method));
  return TAB_ORDER.filter((tag) => computed.has(tag));
}

export function defaultTab(analysis: AnalyzeResponse): MethodTag {
  return analysis.selected;
}

export function canSubmit(state: SessionState): boolean {
  return state.grid.length > 0 && state.errors.length === 0;
}

export function pushUndo(state: SessionState): void {
  state.undoStack.push(state.grid.map((row) => [...row]));
  if (state.undoStack.length > 100) state.undoStack.shift();
}

export function popUndo(state: SessionState): boolean {
  const prev = state.undoStack.pop();
  if (!prev) return false;
  state.grid = prev;
  return true;
}
