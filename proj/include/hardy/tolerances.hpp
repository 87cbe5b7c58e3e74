#pragma once

namespace hardy {

struct Tolerances {
  double unit = 1e-12;       // sup|R| <= 1 + unit
  double touch = 1e-10;      // 1 - |R| below this marks a touching node
  double outer = 1e-8;       // |T_e|^2 + |R|^2 = 1, negative coefficients of T_e
  double blaschke = 1e-8;    // |B| = 1 on the grid, B(zeta_k) = 0
  double fft = 1e-10;        // samples vs coefficients
  double psd = 1e-12;        // smallest admissible Gram eigenvalue
  double order = 1e-10;      // kernel-value ordering slack
  double hat = 1e-6;         // hat-space membership threshold
  double derivative = 1e-12; // |B'(zeta_k)| below this is degenerate
  double duplicate = 1e-12;  // two mass points closer than this coincide
};

}  // namespace hardy
