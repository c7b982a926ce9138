#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hbvm {

using State = std::vector<double>;

// A first-order ODE right-hand side y' = f(y), with an optional conserved
// quantity to monitor along trajectories.  This is the interface the
// integrator works against; Hamiltonian problems provide it via
// HamiltonianSystem::field(), and non-Hamiltonian test problems (e.g. scalar
// linear decay) can supply one directly.
struct VectorField {
    std::size_t dim = 0;
    std::function<State(const State&)> f;
    std::function<double(const State&)> energy;  // may be empty
    std::string name;

    bool has_energy() const { return static_cast<bool>(energy); }
};

// Canonical Hamiltonian system with m degrees of freedom: the state is
// y = (q, p) of dimension 2m and the flow is y' = J grad H(y), where J is the
// canonical skew matrix [0 I; -I 0].
struct HamiltonianSystem {
    std::size_t m = 0;
    std::function<double(const State&)> hamiltonian;
    std::function<State(const State&)> gradient;
    std::optional<int> polynomial_degree;  // degree of H when polynomial
    std::string name;

    std::size_t dim() const { return 2 * m; }

    // f(y) = J grad H(y): the first m components take the p-gradient, the
    // last m the negated q-gradient.
    State field_eval(const State& y) const;

    // Package the induced vector field together with the energy monitor.
    VectorField field() const;
};

// Multiply by the canonical skew matrix: (q, p) -> (p-part, -q-part).
State apply_canonical_j(const State& v);

}  // namespace hbvm
