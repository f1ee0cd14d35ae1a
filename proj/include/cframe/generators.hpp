#pragma once

// Random instances drawn from the portable Rng. Entries are standard complex
// normals placed only where the descriptor's structure allows them.

#include "cframe/hilbert_module.hpp"
#include "cframe/random.hpp"

namespace cframe::gen {

AlgebraElement algebra_element(const AlgebraDescriptor& d, Rng& rng);
AlgebraElement hermitian_element(const AlgebraDescriptor& d, Rng& rng);
ModuleElement module_element(const ModuleDescriptor& d, Rng& rng);
ModuleOperator module_operator(const ModuleDescriptor& d, Rng& rng);
/// R* R for a random R: positive by construction.
ModuleOperator positive_operator(const ModuleDescriptor& d, Rng& rng);
/// Random invertible operator: identity-shifted so sigma_min is bounded away from 0.
ModuleOperator invertible_operator(const ModuleDescriptor& d, Rng& rng);

}  // namespace cframe::gen
