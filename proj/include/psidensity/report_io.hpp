#pragma once

#include <iosfwd>
#include <string>

#include "psidensity/counterexamples.hpp"
#include "psidensity/density.hpp"
#include "psidensity/series_density.hpp"
#include "psidensity/theorems.hpp"

namespace psidensity {

// JSON is the canonical machine format; CSV is a flat convenience view.
std::string to_json(const DensitySeries& s);
std::string to_json(const DensityEstimate& e);
std::string to_json(const SeriesDensityEstimate& e);
std::string to_json(const TheoremReport& r);
std::string to_json(const SuiteReport& r);
std::string to_json(const GrowthDiagnostics& g);
std::string to_json(const PwlLimitReport& r);
std::string to_json(const RatioBoundednessReport& r);
std::string to_json(const ExceptionalSetReport& r);

void write_csv(std::ostream& os, const DensitySeries& s);
void write_csv(std::ostream& os, const Trace& t, const std::string& header);

// two-column whitespace-separated plot points, '#' header naming the trace
void write_plotpoints(std::ostream& os, const DensitySeries& s);
void write_plotpoints(std::ostream& os, const Trace& t, const std::string& name);

}  // namespace psidensity
