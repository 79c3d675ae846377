#include "lieint/hamiltonian.hpp"

namespace lieint {

PeriodicIntegral find_periodic_integral(const LieHamiltonianSystem& system, int steps_per_period) {
  FloquetAnalysis analysis = analyze_floquet(system.algebra(), system.curve(), steps_per_period);
  const PeriodicGenerator* chosen = select_generator(analysis.search);
  if (chosen == nullptr) throw NoGeneratorFound(analysis.classification);
  PeriodicGenerator generator = *chosen;
  FirstIntegral integral(analysis.fund, system.basis(), generator.vector, generator.period_multiple);
  return PeriodicIntegral{std::move(integral), std::move(analysis), std::move(generator)};
}

}  // namespace lieint
