#pragma once

// CSV and JSON emission with reproducible formatting: '.' decimal separator,
// 17 significant digits, '\n' line endings.

#include <string>
#include <vector>

#include "isoperm/grid_field.hpp"
#include "isoperm/profiles.hpp"
#include "isoperm/step_function.hpp"
#include "isoperm/verifier.hpp"

namespace isoperm {

std::string format_double(double v);

void write_profile_csv(const std::string& path, const Profile& I,
                       const std::vector<double>& grid);
void write_step_csv(const std::string& path, const StepFunction& f);
StepFunction read_step_csv(const std::string& path);

// columns: coordinates..., value, weight
WeightedSample read_sample_csv(const std::string& path);

// two-column (t, I) table
Profile read_profile_csv(const std::string& path);

void write_records_csv(const std::string& path, const VerificationSuite& suite);
void write_suite_json(const std::string& path, const VerificationSuite& suite);

// minimal vector-graphic rendering of (t, lhs, rhs) per record
void write_records_svg(const std::string& path, const VerificationSuite& suite);

// key=value profile descriptor block, and its inverse for the kinds that
// round-trip from parameters alone
std::string profile_config(const Profile& I);
Profile parse_profile_config(const std::string& text);

// two-column (t, N(t)) Young function table
YoungFunction read_young_csv(const std::string& path);

} // namespace isoperm
