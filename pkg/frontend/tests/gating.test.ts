import { describe, expect, it } from "vitest";
import { availableTabs, defaultTab, enabledTabs } from "../src/state";
import type { AnalyzeResponse } from "../src/types";
import n5 from "./fixtures/analyze_n5.json";
import n7 from "./fixtures/analyze_n7.json";

const fixture5 = n5 as unknown as AnalyzeResponse;
const fixture7 = n7 as unknown as AnalyzeResponse;

describe("decision-rule tab gating", () => {
  it("n=5 session enables only the Bayes tab", () => {
    expect(fixture5.study.n).toBe(5);
    expect(fixture5.plan.rule_fired).toBe("Rule1_nLE5");
    expect([...enabledTabs(fixture5)]).toEqual(["bayes"]);
    expect(defaultTab(fixture5)).toBe("bayes");
  });

  it("n=7 session enables only the Expanded BCa tab", () => {
    expect(fixture7.study.n).toBe(7);
    expect(fixture7.plan.rule_fired).toBe("Rule2_n6to8");
    expect([...enabledTabs(fixture7)]).toEqual(["expanded-bca"]);
    expect(defaultTab(fixture7)).toBe("expanded-bca");
  });

  it("gating is derived solely from plan.recommended", () => {
    const doctored = {
      ...fixture5,
      plan: { ...fixture5.plan, recommended: ["t", "percentile"] },
    } as AnalyzeResponse;
    expect([...enabledTabs(doctored)].sort()).toEqual(["percentile", "t"]);
  });

  it("all computed methods appear as tabs", () => {
    const tabs = availableTabs(fixture7);
    expect(tabs).toContain("bayes");
    expect(tabs).toContain("expanded-bca");
    expect(tabs).toContain("t");
    expect(tabs.indexOf("bayes")).toBe(0);
  });

  it("no analysis means no enabled tabs", () => {
    expect(enabledTabs(null).size).toBe(0);
  });
});
