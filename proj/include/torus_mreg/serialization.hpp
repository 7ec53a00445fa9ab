// JSON encoding of configs and reports: parsers for the value types that
// experiment configs name (matrices, trig polynomials, weights, spaces,
// symbol families, problems) and emitters for the module report structs.
// Parsers throw Error with the offending JSON path in the message.
#pragma once

#include <json.hpp>

#include <string>

#include "torus_mreg/aee.hpp"
#include "torus_mreg/jodeit.hpp"
#include "torus_mreg/weights.hpp"

namespace torus_mreg::serialization {

using nlohmann::json;

// Complex matrix as rows of [re, im] entry pairs.
json matrix_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& where);

// {"dim": d, "order": N, "coeffs": [{"k": k, "re": [...], "im": [...]}]};
// only nonzero coefficients are listed.
json poly_json(const fourier::TrigPolynomial& f);
fourier::TrigPolynomial poly_from_json(const json& j, const std::string& where);

// {"kind": "constant", "value": v, "grid": G} |
// {"kind": "power", "alpha": a, "grid": G} |
// {"kind": "samples", "samples": [...]}
json weight_json(const Weight& w);
Weight weight_from_json(const json& j, const std::string& where);

// {"kind": "Lp" | "WeightedLp", "p": number or "inf", "weight": {...}?}
json space_json(const spaces::SpaceDescriptor& phi);
spaces::SpaceDescriptor space_from_json(const json& j,
                                        const std::string& where);

// Symbol descriptions, one JSON object per kind:
//   {"kind": "identity" | "zero", "dim": d}
//   {"kind": "i-sgn"} | {"kind": "ramp"}
//   {"kind": "rotation", "theta": x}
//   {"kind": "cauchy", "dim": d, "scale": s}        s/(1+k^2) I
//   {"kind": "random-smooth", "seed": n, "out_dim": d, "in_dim": d, "terms": t}
//   {"kind": "table", "k_min": k0, "values": [matrix, ...]}
//   {"kind": "delay", "h": symbol, "g": symbol}
symbols::OperatorSymbol symbol_from_json(const json& j,
                                         const std::string& where);

// {"dim": d, "P": matrix, "B": matrix, "A": matrix, "K": n, "conv": symbol?};
// a missing conv means the zero convolutor.
aee::AeeProblem problem_from_json(const json& j, const std::string& where);

// Report emitters, one per module report struct.
json kernel_report_json(const jodeit::KernelReport& rep);
json order_sup_json(const symbols::OrderSup& s);
json seminorm_json(const symbols::SeminormReport& rep);
json variational_json(const symbols::VariationalReport& rep);
json condition_json(const symbols::ConditionReport& rep);
json dyadic_bound_json(const symbols::DyadicBoundResult& rep);
json maximal_estimate_json(const weights::MaximalEstimate& rep);
json ap_json(const weights::ApReport& rep);
json rubio_json(const weights::RubioReport& rep);
json aq_json(const weights::AqReport& rep);
json line_extension_json(const weights::LineExtensionReport& rep);
json deleeuw_json(const weights::DeleeuwReport& rep);
json residual_json(const aee::ResidualReport& rep);
json identity_json(const aee::IdentityReport& rep);
json windowed_sup_json(const aee::WindowedSup& s);
json characterization_json(const aee::CharacterizationReport& rep);
json mr_experiment_json(const aee::MrExperimentReport& rep);

}  // namespace torus_mreg::serialization
