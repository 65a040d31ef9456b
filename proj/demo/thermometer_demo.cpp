// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Steady-state temperature sensitivity of a two-mode thermometer, and how
// fast a squeezed probe gets there compared to a thermal one.

#include <cstdio>

#include "gaussthermo.hpp"

int main() {
  namespace gt = gaussthermo;

  gt::SystemParams p;
  p.gn = 0.35;
  p.m_a = p.m_b = 0.5;

  const gt::Propagator prop(p);
  const auto nu = gt::symplectic_eigenvalues(prop.steady_state());
  std::printf("steady state: nu+ = %.6f  nu- = %.6f  nu~- = %.6f\n", nu.nu_plus,
              nu.nu_minus, gt::ppt_min_eigenvalue(prop.steady_state()));

  const gt::QfiEvaluator qfi(p);
  const auto thermal = gt::thermal_state(0.1, 0.1);
  const auto twin = gt::twin_beam(2.0);
  const double temperature = gt::temperature_from_occupation(p.omega_a, p.m_a);
  std::printf("%8s %14s %14s %14s\n", "t", "Q_M thermal", "Q_M twin", "Q_T thermal");
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
    const double qt = qfi(thermal, t);
    std::printf("%8.2f %14.6f %14.6f %14.6f\n", t, qt, qfi(twin, t),
                gt::qfi_temperature(qt, p.omega_a, temperature));
  }
  return 0;
}
