#pragma once

#include "core/config.hpp"
#include "core/table.hpp"

namespace kerrpol {

/**
 * Four canonical seed-ratio sweeps bundled as presets, labeled 'a' to 'd'.
 * All split a fixed total photon budget N between pump and seed
 * (constant_total) and tabulate V2, V3 and the shot-noise reference:
 *
 *   a: N = 1e10, strong common Kerr phase, small rate anisotropy; V2
 *      oscillates through the shot-noise level many times across the scan.
 *   b: like a morphology probe at N = 1e8 with slow phase drift: V2 falls
 *      almost linearly with seed ratio over the scanned window.
 *   c: panel a with a quadrupled budget N = 4e10; the first shot-noise
 *      crossing moves to a smaller seed ratio.
 *   d: N = 1e8 with equal self-Kerr rates; the ellipse never deforms and
 *      V2 = V3 = shot noise identically.
 */
SweepConfig fig1_config(char panel, EngineKind engine);

Table fig1_table(char panel, EngineKind engine);

}  // namespace kerrpol
