#pragma once

// Machine-readable reports. Every JSON document carries "schema": 1; CSV
// headers are fixed.

#include "revspec/embed3d.hpp"
#include "revspec/obstruction.hpp"
#include "revspec/profile.hpp"
#include "revspec/spectral.hpp"

#include <json.hpp>

#include <string>

namespace revspec {

inline constexpr int kReportSchema = 1;

nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ChannelSpectrum& cs);
nlohmann::json to_json(const SpectrumTable& t);
nlohmann::json to_json(const BoundsReport& b);
nlohmann::json to_json(const ObstructionReport& r);
nlohmann::json to_json(const MetricResidual& r);

/// {"schema": 1, "kind": kind} merged with payload.
nlohmann::json document(const std::string& kind, nlohmann::json payload);

/// Columns m,lambda,multiplicity,channels; channels as "k:j" joined by ';'.
std::string spectrum_csv(const SpectrumTable& t);

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

}  // namespace revspec
