/** Typed mirror of the analyze-response schema (GET /api/schema, version 1). */

export type MethodTag = "t" | "adjusted-t" | "percentile" | "bca" | "expanded-bca" | "bayes";

export type RuleTag = "Rule1_nLE5" | "Rule2_n6to8" | "Rule3_nGE9";

export interface StudySummary {
  n: number;
  mean: number;
  sd: number | null;
  skewness: number | null;
  scores: number[];
  flags: string[];
}

export interface MethodPlan {
  rule_fired: RuleTag;
  recommended: MethodTag[];
  rationale: string;
  caveats: string[];
}

export interface IntervalDiagnostics {
  violates_lower: boolean;
  violates_upper: boolean;
  width: number;
  degenerate: boolean;
}

export interface IntervalEntry {
  method: MethodTag;
  lower: number;
  upper: number;
  level: number;
  recommended: boolean;
  selected: boolean;
  diagnostics: IntervalDiagnostics;
  warnings: string[];
}

export interface BandLabelSpan {
  kind: "bands";
  bands_touched: string[];
  lower_label: string;
  upper_label: string;
  clamped: boolean;
}

export interface PercentileLabelSpan {
  kind: "percentile";
  lower_percentile: number;
  upper_percentile: number;
  clamped: boolean;
}

export type LabelSpan = BandLabelSpan | PercentileLabelSpan;

export interface ScaleBand {
  label: string;
  lower: number;
  upper: number;
}

export interface BandScale {
  name: string;
  kind: "bands";
  provenance: string;
  bands: ScaleBand[];
}

export interface PercentileScale {
  name: string;
  kind: "percentile";
  provenance: string;
  anchors: [number, number][];
}

export type Scale = BandScale | PercentileScale;

export interface ScoreFrequency {
  values: number[];
  counts: number[];
}

export interface PosteriorMarginal {
  mu: number[];
  density: number[];
}

export interface AnalyzeResponse {
  schema_version: string;
  seed: number;
  level: number;
  study: StudySummary;
  plan: MethodPlan;
  selected: MethodTag;
  interval_kind: "confidence" | "credible";
  intervals: IntervalEntry[];
  labels: Record<string, LabelSpan>;
  plots: {
    score_frequency: ScoreFrequency;
    interval_bands: {
      scales: Scale[];
      selected: { method: MethodTag; lower: number; upper: number };
      mean: number;
    };
    posterior_marginal: PosteriorMarginal | null;
  };
  warnings: string[];
}

export interface AnalyzeRequestBody {
  responses?: number[][];
  scores?: number[];
  omitted_item?: number;
  level?: number;
  method?: string;
  bootstrap_samples?: number;
  seed?: number;
}

export interface ApiError {
  error: { message: string; details?: { field: string; message: string }[] };
}
