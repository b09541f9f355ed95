#pragma once

#include <string>

#include <json.hpp>

#include "extremo/extremogram.hpp"
#include "extremo/fit.hpp"
#include "extremo/inference.hpp"
#include "extremo/types.hpp"

namespace extremo {

// Grid field CSV: header "i1,i2,t,value", one row per cell in storage order
// with 1-based indices. Reading infers the dimensions, requires every cell
// exactly once and parses values losslessly; writing uses shortest round-trip
// formatting so a write/read cycle is bit-identical.
SpaceTimeField read_field_csv(const std::string& path);
void write_field_csv(const SpaceTimeField& field, const std::string& path);

// Estimate CSV: one row per (axis, lag) with raw and corrected values, pair
// counts, contributing slices and the threshold. Missing values print as "nan".
void write_estimates_csv(const std::vector<ExtremogramEstimate>& estimates,
                         const std::string& path);

// Envelope CSV: one row per lag and axis with observed value and band bounds.
void write_envelope_csv(const PermutationEnvelope& env, const std::string& path);

nlohmann::ordered_json fit_to_json(const WlseFit& fit);
nlohmann::ordered_json region_to_json(const ConfidenceRegion& region);

void write_json(const nlohmann::ordered_json& doc, const std::string& path);

// Rank transform to standard Frechet margins, applied per site along time:
// value -> -1/log(rank/(T+1)) with average ranks on ties. Rejects T < 2 and
// sites with constant series.
SpaceTimeField frechet_transform(const SpaceTimeField& field);

// shortest decimal string that parses back to exactly the same double
std::string format_double(double x);

}  // namespace extremo
