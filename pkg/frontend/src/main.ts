import { analyze } from "./api";
import { gridToResponses, parseCsv, validateGrid } from "./csv";
import { svgToPngBlob, downloadBlob } from "./png";
import { renderGrid, renderResultPanel, renderTabs } from "./render";
import {
  canSubmit,
  defaultTab,
  freshSession,
  popUndo,
  pushUndo,
  type SessionState,
} from "./state";
import type { MethodTag } from "./types";
import "./style.css";

const state: SessionState = freshSession();

const el = {
  file: document.getElementById("file-input") as HTMLInputElement,
  gridSection: document.getElementById("grid-section") as HTMLElement,
  gridHolder: document.getElementById("grid-holder") as HTMLElement,
  submit: document.getElementById("submit") as HTMLButtonElement,
  undo: document.getElementById("undo") as HTMLButtonElement,
  status: document.getElementById("status") as HTMLElement,
  results: document.getElementById("results") as HTMLElement,
  tabs: document.getElementById("tabs") as HTMLElement,
  panel: document.getElementById("panel") as HTMLElement,
  scale: document.getElementById("scale-select") as HTMLSelectElement,
};

function revalidate(): void {
  const { errors, omittedItem, itemOrder } = validateGrid(state.grid, state.header);
  state.errors = errors;
  state.omittedItem = omittedItem;
  state.itemOrder = itemOrder;
  renderGrid(el.gridHolder, state.grid, state.header, state.errors, onCellEdit);
  el.submit.disabled = !canSubmit(state);
  el.undo.disabled = state.undoStack.length === 0;
  el.status.textContent = state.errors.length
    ? `${state.errors.length} problem(s) to fix before submitting`
    : `${state.grid.length} respondent(s) ready`;
}

function onCellEdit(row: number, col: number, value: string): void {
  pushUndo(state);
  state.grid[row][col] = value.trim();
  revalidate();
}

el.undo.addEventListener("click", () => {
  if (popUndo(state)) revalidate();
});

el.file.addEventListener("change", async () => {
  const file = el.file.files?.[0];
  if (!file) return;
  const text = await file.text();
  const { header, grid } = parseCsv(text);
  state.header = header;
  state.grid = grid;
  state.undoStack = [];
  state.analysis = null;
  el.results.hidden = true;
  el.gridSection.hidden = false;
  revalidate();
});

el.submit.addEventListener("click", async () => {
  if (!canSubmit(state) || !state.itemOrder) return;
  const token = ++state.requestToken;
  el.submit.disabled = true;
  el.status.textContent = "analyzing...";
  try {
    const body = {
      responses: gridToResponses(state.grid, state.itemOrder),
      ...(state.omittedItem !== null ? { omitted_item: state.omittedItem } : {}),
    };
    const analysis = await analyze(body);
    if (token !== state.requestToken) return; // a newer request superseded this one
    state.analysis = analysis;
    state.activeTab = defaultTab(analysis);
    el.status.textContent = `decision rule ${analysis.plan.rule_fired}: ` +
      analysis.plan.recommended.join(", ") + " recommended";
    showResults();
  } catch (err) {
    if (token === state.requestToken) {
      el.status.textContent = err instanceof Error ? err.message : String(err);
    }
  } finally {
    if (token === state.requestToken) el.submit.disabled = !canSubmit(state);
  }
});

el.scale.addEventListener("change", () => {
  state.activeScale = el.scale.value;
  showResults();
});

function showResults(): void {
  if (!state.analysis || !state.activeTab) return;
  el.results.hidden = false;
  renderTabs(el.tabs, state.analysis, state.activeTab, (tab: MethodTag) => {
    state.activeTab = tab;
    showResults();
  });
  renderResultPanel(el.panel, state.analysis, state.activeTab, state.activeScale);
  for (const button of el.panel.querySelectorAll<HTMLButtonElement>(".save-png")) {
    button.addEventListener("click", async () => {
      const svg = button.parentElement?.querySelector(".chart-svg")?.innerHTML ?? "";
      try {
        const blob = await svgToPngBlob(svg);
        const name = (button.getAttribute("data-chart") ?? "chart")
          .toLowerCase().replace(/[^a-z0-9]+/g, "-");
        downloadBlob(blob, `${name}.png`);
      } catch (err) {
        el.status.textContent = err instanceof Error ? err.message : String(err);
      }
    });
  }
}
