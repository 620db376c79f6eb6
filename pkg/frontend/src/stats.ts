/** Order statistics for the per-point aggregation (median + quartiles). */

export interface Quartiles {
  q1: number;
  med: number;
  q3: number;
}

/** Linear-interpolation quantile on a sorted copy (the R type-7 rule). */
export function quantile(values: readonly number[], p: number): number {
  if (values.length === 0) throw new Error("quantile of an empty sample");
  const sorted = [...values].sort((a, b) => a - b);
  const h = (sorted.length - 1) * p;
  const lo = Math.floor(h);
  const hi = Math.min(lo + 1, sorted.length - 1);
  return (sorted[lo] as number) + (h - lo) * ((sorted[hi] as number) - (sorted[lo] as number));
}

export function median(values: readonly number[]): number {
  return quantile(values, 0.5);
}

export function quartiles(values: readonly number[]): Quartiles {
  return { q1: quantile(values, 0.25), med: quantile(values, 0.5), q3: quantile(values, 0.75) };
}
