/** Display formatting: probabilities always show three decimals. */

export function formatProbability(p: number): string {
  return p.toFixed(3);
}

export function formatGain(gain: number): string {
  const sign = gain > 0 ? "+" : "";
  return `${sign}${gain.toFixed(3)}`;
}

export function formatAngle(radians: number): string {
  const asPi = radians / Math.PI;
  return `${asPi.toFixed(3)}π`;
}
