/** Thin typed client for the analysis API. */

import type { AnalyzeRequestBody, AnalyzeResponse, ApiError, Scale } from "./types";

export async function analyze(body: AnalyzeRequestBody): Promise<AnalyzeResponse> {
  const res = await fetch("/api/analyze", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) {
    let message = `analyze failed (${res.status})`;
    try {
      const err = (await res.json()) as ApiError;
      message = err.error.message;
      if (err.error.details?.length) {
        message += ": " + err.error.details.map((d) => `${d.field}: ${d.message}`).join("; ");
      }
    } catch {
      /* non-JSON error body; keep the status message */
    }
    throw new Error(message);
  }
  return (await res.json()) as AnalyzeResponse;
}

export async function fetchScales(): Promise<Scale[]> {
  const res = await fetch("/api/scales");
  if (!res.ok) throw new Error(`scales failed (${res.status})`);
  return ((await res.json()) as { scales: Scale[] }).scales;
}
