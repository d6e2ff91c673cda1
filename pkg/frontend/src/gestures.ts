/** Slider-to-parameter mappings for the control panes. */

/** The zoom slider covers the open interval (0, 1); endpoints are invalid
 * viewpoints, so the slider stops just short of them. */
export function zoomFromSlider(t: number): number {
  const clamped = Math.max(0, Math.min(1, t));
  return Math.min(0.99, Math.max(0.01, Math.round(clamped * 100) / 100));
}

export interface SliderSpec {
  param: string;
  label: string;
  min: number;
  max: number;
  step: number;
}

/** Spring-console sliders; values post to /spring/params as-is. */
export const SPRING_SLIDERS: SliderSpec[] = [
  { param: "delta_rep", label: "repulsion", min: 0, max: 0.2, step: 0.001 },
  { param: "delta_visc", label: "viscosity", min: 0, max: 0.95, step: 0.01 },
  { param: "delta_lin", label: "vertical force", min: 0, max: 2, step: 0.05 },
  { param: "rest_length", label: "rest length", min: 0.1, max: 3, step: 0.1 },
  { param: "step_scale", label: "step scale", min: 0.01, max: 0.5, step: 0.01 },
];

export function sliderValue(spec: SliderSpec, t: number): number {
  const raw = spec.min + (spec.max - spec.min) * Math.max(0, Math.min(1, t));
  const snapped = Math.round(raw / spec.step) * spec.step;
  return Number(snapped.toFixed(6));
}
