#include "hbvm/hamiltonian.hpp"

#include <stdexcept>

namespace hbvm {

State apply_canonical_j(const State& v) {
    if (v.size() % 2 != 0) {
        throw std::invalid_argument("apply_canonical_j: state dimension must be even");
    }
    const std::size_t m = v.size() / 2;
    State out(v.size());
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = v[m + i];
        out[m + i] = -v[i];
    }
    return out;
}

State HamiltonianSystem::field_eval(const State& y) const {
    return apply_canonical_j(gradient(y));
}

VectorField HamiltonianSystem::field() const {
    VectorField vf;
    vf.dim = dim();
    vf.name = name;
    const auto grad = gradient;
    vf.f = [grad](const State& y) { return apply_canonical_j(grad(y)); };
    vf.energy = hamiltonian;
    return vf;
}

}  // namespace hbvm
