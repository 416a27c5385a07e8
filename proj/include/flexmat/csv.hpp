#pragma once

#include <string>
#include <vector>

#include "flexmat/core.hpp"
#include "flexmat/matrix.hpp"

namespace flexmat {

// Sessions CSV, one row per session, exact column order
//   vehicle_id,arrival_slot,departure_slot,energy_kwh,max_rate_kw
// with a mandatory header row. Parse errors name the offending row.
std::vector<ChargeSession> read_sessions_csv(const std::string& path);
std::vector<ChargeSession> parse_sessions_csv(const std::string& text);
std::string sessions_to_csv(const std::vector<ChargeSession>& sessions);
void write_sessions_csv(const std::string& path,
                        const std::vector<ChargeSession>& sessions);

// Matrix CSV: header `k\t,0,1,...,T-1`, one row per window length k from 1
// to D, values in kW with 6 decimal places, masked cells as empty fields,
// LF line endings.
std::string matrix_to_csv(const ReductionPotentialMatrix& matrix);
void write_matrix_csv(const std::string& path,
                      const ReductionPotentialMatrix& matrix);

// Reads values and mask back. Only the CSV carries shape information, so
// the returned horizon has the parsed slot count and a 1 h slot duration;
// callers that know better patch horizon/normalization/num_vehicles.
ReductionPotentialMatrix parse_matrix_csv(const std::string& text);
ReductionPotentialMatrix read_matrix_csv(const std::string& path);

// Whole-file helpers used by the CSV/JSON/SVG writers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace flexmat
