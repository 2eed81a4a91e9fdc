/** CSV parsing and per-cell validation for the upload grid.
 *
 * Mirrors the server's acceptance rules so users see problems before
 * submitting, but all statistics still come from the API: this module only
 * decides whether the grid is well-formed.
 */

export interface CellError {
  row: number; // 0-based data row
  col: number; // 0-based column
  message: string;
}

export interface ParsedCsv {
  header: string[] | null;
  grid: string[][];
}

export interface ValidationResult {
  errors: CellError[];
  omittedItem: number | null; // for 9-column sheets, from Q-labelled headers
  itemOrder: number[] | null; // questionnaire item per column
}

const Q_NAME = /^[Qq](10|[1-9])$/;

export function parseCsv(text: string): ParsedCsv {
  const rows = text
    .split(/\r?\n/)
    .map((line) => line.split(",").map((c) => c.trim()))
    .filter((cells) => cells.some((c) => c !== ""));
  if (rows.length === 0) return { header: null, grid: [] };
  const headerish = rows[0].some((c) => c !== "" && Number.isNaN(Number(c)));
  return headerish
    ? { header: rows[0], grid: rows.slice(1) }
    : { header: null, grid: rows };
}

function itemOrderFromHeader(header: string[] | null): number[] | null {
  if (!header) return null;
  const items: number[] = [];
  for (const cell of header) {
    const m = Q_NAME.exec(cell);
    if (!m) return null;
    items.push(Number(m[1]));
  }
  return new Set(items).size === items.length ? items : null;
}

export function validateGrid(grid: string[][], header: string[] | null): ValidationResult {
  const errors: CellError[] = [];
  if (grid.length === 0) {
    return { errors: [{ row: 0, col: 0, message: "no data rows" }], omittedItem: null, itemOrder: null };
  }
  const width = grid[0].length;
  if (width !== 9 && width !== 10) {
    return {
      errors: [{ row: 0, col: 0, message: `expected 9 or 10 answer columns, found ${width}` }],
      omittedItem: null,
      itemOrder: null,
    };
  }

  let itemOrder = itemOrderFromHeader(header);
  let omittedItem: number | null = null;
  if (width === 9) {
    if (!itemOrder) {
      return {
        errors: [{
          row: 0, col: 0,
          message: "9-column files need Q-labelled headers naming the omitted question",
        }],
        omittedItem: null,
        itemOrder: null,
      };
    }
    for (let q = 1; q <= 10; q += 1) {
      if (!itemOrder.includes(q)) omittedItem = q;
    }
  }
  if (!itemOrder) itemOrder = Array.from({ length: 10 }, (_, i) => i + 1);

  grid.forEach((row, r) => {
    if (row.length !== width) {
      errors.push({ row: r, col: 0, message: `row has ${row.length} cells, expected ${width}` });
      return;
    }
    row.forEach((cell, c) => {
      const item = itemOrder![c];
      const value = Number(cell);
      if (cell === "" || Number.isNaN(value) || !Number.isInteger(value)) {
        errors.push({ row: r, col: c, message: `Q${item}: "${cell}" is not a whole number` });
      } else if (value < 1 || value > 5) {
        errors.push({ row: r, col: c, message: `Q${item}: response ${value} outside 1..5` });
      }
    });
  });
  return { errors, omittedItem, itemOrder };
}

/** Grid -> request rows, in questionnaire order. Call only on a valid grid. */
export function gridToResponses(grid: string[][], itemOrder: number[]): number[][] {
  return grid.map((row) => {
    const byItem = new Map<number, number>();
    row.forEach((cell, c) => byItem.set(itemOrder[c], Number(cell)));
    return [...byItem.keys()].sort((a, b) => a - b).map((item) => byItem.get(item)!);
  });
}
