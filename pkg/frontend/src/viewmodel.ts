/** Pure transforms from API payloads to render models.
 *
 * Contract: the UI displays what the server computed. These helpers reshape
 * for rendering but never re-rank, re-score, or re-aggregate; the contract
 * tests pin that against recorded server fixtures.
 */

import type {
  ClusterRow,
  LearnerFeed,
  LintFinding,
  Recommendation,
  SpaceView,
  StrategyProfile,
} from "./api.js";

export interface RankedRow {
  itemId: string;
  score: number;
  reasons: string[];
  rank: number;
}

/** Keeps the server's order; only adds 1-based rank labels. */
export function rankedRows(recommendations: Recommendation[]): RankedRow[] {
  return recommendations.map((rec, index) => ({
    itemId: rec.item_id,
    score: rec.score,
    reasons: rec.reasons,
    rank: index + 1,
  }));
}

export interface Bar {
  strategy: string;
  count: number;
  /** 0..1, relative to the tallest bar; 0 when the profile is empty. */
  fraction: number;
}

/** Bar chart rows in the server's key order, scaled to the max count. */
export function profileBars(profile: StrategyProfile): Bar[] {
  const entries = Object.entries(profile.counts);
  const max = Math.max(0, ...entries.map(([, count]) => count));
  return entries.map(([strategy, count]) => ({
    strategy,
    count,
    fraction: max === 0 ? 0 : count / max,
  }));
}

export interface SequenceRow {
  label: string;
  verb: string;
  objectType: string;
  widget: string | null;
  occurrences: number;
}

export function sequenceRows(clusters: ClusterRow[]): SequenceRow[] {
  return clusters.map((row) => ({
    label: `${row.signature.verb} ${row.signature.object_type}${
      row.signature.widget ? ` @${row.signature.widget}` : ""
    }`,
    verb: row.signature.verb,
    objectType: row.signature.object_type,
    widget: row.signature.widget,
    occurrences: row.occurrences,
  }));
}

export interface MemberRow {
  learner: string;
  isOwner: boolean;
  online: boolean;
}

export function memberRows(view: SpaceView, online: string[]): MemberRow[] {
  const onlineSet = new Set(online);
  return view.members.map((learner) => ({
    learner,
    isOwner: learner === view.owner,
    online: onlineSet.has(learner),
  }));
}

export function gapRows(feed: LearnerFeed): { label: string; have: number; want: number }[] {
  return feed.gap.map((entry) => ({
    label: entry.key.join(" / "),
    have: entry.have,
    want: entry.want,
  }));
}

export function lintRows(findings: LintFinding[]): { code: string; text: string }[] {
  return findings.map((f) => ({ code: f.code, text: f.message }));
}
