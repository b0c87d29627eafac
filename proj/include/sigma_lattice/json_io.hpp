#pragma once

// JSON schemas used by the CLI and by anything that wants to persist a
// lattice or a wavefunction spec:
//
//   Lattice:          {"omega1": [re, im], "omega2": [re, im]}
//   WavefunctionSpec: {"lattice": {...}, "nPhi": n,
//                      "zeros": [[re, im], ...], "K": [re, im]}

#include <json.hpp>

#include <complex>
#include <vector>

#include "sigma_lattice/lattice.hpp"
#include "sigma_lattice/lll.hpp"

namespace sigma_lattice {

template <typename Real>
nlohmann::json complex_to_json(const std::complex<Real>& z) {
    return nlohmann::json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())});
}

template <typename Real = double>
std::complex<Real> complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw Error("expected a complex number as [re, im]");
    return {static_cast<Real>(j[0].get<double>()), static_cast<Real>(j[1].get<double>())};
}

template <typename Real>
nlohmann::json to_json(const Lattice<Real>& lat) {
    return {{"omega1", complex_to_json(lat.omega1())}, {"omega2", complex_to_json(lat.omega2())}};
}

template <typename Real = double>
Lattice<Real> lattice_from_json(const nlohmann::json& j) {
    if (!j.contains("omega1") || !j.contains("omega2"))
        throw Error("lattice JSON needs omega1 and omega2");
    return lattice_from_basis(complex_from_json<Real>(j.at("omega1")),
                              complex_from_json<Real>(j.at("omega2")));
}

template <typename Real>
nlohmann::json to_json(const WavefunctionSpec<Real>& spec) {
    nlohmann::json zeros = nlohmann::json::array();
    for (const auto& w : spec.zeros()) zeros.push_back(complex_to_json(w));
    return {{"lattice", to_json(spec.lattice())},
            {"nPhi", spec.n_phi()},
            {"zeros", zeros},
            {"K", complex_to_json(spec.boundary_k())}};
}

template <typename Real = double>
WavefunctionSpec<Real> wavefunction_spec_from_json(const nlohmann::json& j) {
    const auto lat = lattice_from_json<Real>(j.at("lattice"));
    const int n_phi = j.at("nPhi").get<int>();
    std::vector<std::complex<Real>> zeros;
    for (const auto& w : j.at("zeros")) zeros.push_back(complex_from_json<Real>(w));
    if (j.contains("K"))
        return WavefunctionSpec<Real>::with_boundary_phase(lat, n_phi, std::move(zeros),
                                                           complex_from_json<Real>(j.at("K")));
    return WavefunctionSpec<Real>::from_zeros(lat, n_phi, std::move(zeros));
}

} // namespace sigma_lattice
