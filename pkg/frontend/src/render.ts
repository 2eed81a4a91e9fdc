/** DOM builders for the validation grid and the results view.
 *
 * Pure DOM-in/DOM-out so the views are testable under jsdom. The UI computes
 * no statistics: every displayed number is read from the analyze response.
 */

import type { CellError } from "./csv";
import type { AnalyzeResponse, LabelSpan, MethodTag } from "./types";
import { METHOD_NAMES, availableTabs, enabledTabs } from "./state";
import { chartsForTab } from "./charts";

const fmt = (x: number): string => (Math.round(x * 100) / 100).toFixed(2);

export function renderGrid(
  container: HTMLElement,
  grid: string[][],
  header: string[] | null,
  errors: CellError[],
  onEdit: (row: number, col: number, value: string) => void,
): void {
  container.textContent = "";
  const byCell = new Map<string, string>();
  const rowErrors = new Map<number, string>();
  for (const err of errors) {
    byCell.set(`${err.row}:${err.col}`, err.message);
    if (!rowErrors.has(err.row)) rowErrors.set(err.row, err.message);
  }
  const table = document.createElement("table");
  table.className = "grid";
  if (header || grid.length) {
    const width = grid.length ? grid[0].length : header!.length;
    const head = document.createElement("tr");
    head.appendChild(document.createElement("th"));
    for (let c = 0; c < width; c += 1) {
      const th = document.createElement("th");
      th.textContent = header ? header[c] ?? "" : `Q${c + 1}`;
      head.appendChild(th);
    }
    table.appendChild(head);
  }
  grid.forEach((row, r) => {
    const tr = document.createElement("tr");
    const no = document.createElement("th");
    no.textContent = String(r + 1);
    tr.appendChild(no);
    row.forEach((cell, c) => {
      const td = document.createElement("td");
      const input = document.createElement("input");
      input.value = cell;
      input.setAttribute("data-row", String(r));
      input.setAttribute("data-col", String(c));
      const message = byCell.get(`${r}:${c}`);
      if (message) {
        td.className = "cell-error";
        td.title = message;
      }
      input.addEventListener("change", () => onEdit(r, c, input.value));
      td.appendChild(input);
      tr.appendChild(td);
    });
    table.appendChild(tr);
  });
  container.appendChild(table);

  const messages = document.createElement("ul");
  messages.className = "error-list";
  errors.slice(0, 12).forEach((err) => {
    const li = document.createElement("li");
    li.textContent = `row ${err.row + 1}: ${err.message}`;
    messages.appendChild(li);
  });
  if (errors.length > 12) {
    const li = document.createElement("li");
    li.textContent = `... and ${errors.length - 12} more`;
    messages.appendChild(li);
  }
  container.appendChild(messages);
}

export function renderTabs(
  container: HTMLElement,
  analysis: AnalyzeResponse,
  active: MethodTag,
  onSelect: (tab: MethodTag) => void,
): void {
  container.textContent = "";
  const enabled = enabledTabs(analysis);
  for (const tag of availableTabs(analysis)) {
    const button = document.createElement("button");
    button.textContent = METHOD_NAMES[tag];
    button.setAttribute("data-tab", tag);
    button.className = "tab";
    if (enabled.has(tag)) {
      button.classList.add("tab-recommended");
      button.addEventListener("click", () => onSelect(tag));
    } else {
      button.classList.add("tab-disabled");
      button.disabled = true;
      button.title = "Not recommended by the sample-size decision rules";
    }
    if (tag === active) button.classList.add("tab-active");
    container.appendChild(button);
  }
}

function labelText(span: LabelSpan): string {
  if (span.kind === "percentile") {
    return `percentiles ${fmt(span.lower_percentile)} to ${fmt(span.upper_percentile)}`;
  }
  return span.bands_touched.join(", ");
}

export function renderResultPanel(
  container: HTMLElement,
  analysis: AnalyzeResponse,
  tab: MethodTag,
  scaleName: string,
): void {
  container.textContent = "";
  const entry = analysis.intervals.find((e) => e.method === tab);
  if (!entry) return;

  const summary = document.createElement("dl");
  summary.className = "summary";
  const kind = tab === "bayes" ? "credible interval" : "confidence interval";
  const rows: [string, string][] = [
    ["Respondents", String(analysis.study.n)],
    ["Study score (mean)", fmt(analysis.study.mean)],
    ["Std. deviation", analysis.study.sd === null ? "n/a" : fmt(analysis.study.sd)],
    [`${Math.round(entry.level * 100)}% ${kind}`, `${fmt(entry.lower)} to ${fmt(entry.upper)}`],
    ["Width", fmt(entry.diagnostics.width)],
  ];
  const span = analysis.labels[scaleName];
  if (span && entry.selected) rows.push([`Labels (${scaleName})`, labelText(span)]);
  for (const [dt, dd] of rows) {
    const term = document.createElement("dt");
    term.textContent = dt;
    const val = document.createElement("dd");
    val.textContent = dd;
    summary.appendChild(term);
    summary.appendChild(val);
  }
  container.appendChild(summary);

  if (entry.diagnostics.violates_lower || entry.diagnostics.violates_upper) {
    const note = document.createElement("p");
    note.className = "violation";
    note.textContent = "This interval exits the feasible score range [0, 100].";
    container.appendChild(note);
  }

  const warnings = [...analysis.warnings, ...entry.warnings];
  if (warnings.length) {
    const list = document.createElement("ul");
    list.className = "warnings";
    for (const w of warnings) {
      const li = document.createElement("li");
      li.textContent = w;
      list.appendChild(li);
    }
    container.appendChild(list);
  }

  const charts = chartsForTab(analysis, tab, scaleName);
  const blocks: [string, string | null][] = [
    ["Score frequency", charts.frequency],
    [`Interval over the ${scaleName} scale`, charts.interval],
    ["Posterior density of the mean", charts.posterior],
  ];
  for (const [title, svg] of blocks) {
    if (!svg) continue;
    const figure = document.createElement("figure");
    figure.className = "chart";
    const caption = document.createElement("figcaption");
    caption.textContent = title;
    const holder = document.createElement("div");
    holder.className = "chart-svg";
    holder.innerHTML = svg;
    const save = document.createElement("button");
    save.textContent = "Save as PNG";
    save.className = "save-png";
    save.setAttribute("data-chart", title);
    figure.appendChild(caption);
    figure.appendChild(holder);
    figure.appendChild(save);
    container.appendChild(figure);
  }
}
