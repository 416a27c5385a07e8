#include "flexmat/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace flexmat {

namespace {

constexpr char kSessionsHeader[] =
    "vehicle_id,arrival_slot,departure_slot,energy_kwh,max_rate_kw";
constexpr char kMatrixCorner[] = "k\\t";  // literal three characters

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Splits on LF; tolerates CRLF input and a missing final newline.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(std::move(line));
    if (end == text.size()) {
      break;
    }
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return lines;
}

int parse_int_field(const std::string& field, int row, const char* what) {
  int value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << "row " << row << ": " << what << " is not an integer: '" << field
        << "'";
    throw ConfigError(msg.str());
  }
  return value;
}

double parse_double_field(const std::string& field, int row,
                          const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "row " << row << ": " << what << " is not a finite number: '"
        << field << "'";
    throw ConfigError(msg.str());
  }
  return value;
}

// Shortest decimal form that parses back to the identical double.
std::string format_roundtrip(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

std::vector<ChargeSession> parse_sessions_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) {
    throw ConfigError("sessions CSV is empty; expected header '" +
                      std::string(kSessionsHeader) + "'");
  }
  if (lines[0] != kSessionsHeader) {
    throw ConfigError("sessions CSV header must be exactly '" +
                      std::string(kSessionsHeader) + "', got '" + lines[0] +
                      "'");
  }
  std::vector<ChargeSession> sessions;
  sessions.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int row = static_cast<int>(i) + 1;  // 1-based, counting the header
    const std::vector<std::string> fields = split_line(lines[i]);
    if (fields.size() != 5) {
      std::ostringstream msg;
      msg << "row " << row << ": expected 5 fields, got " << fields.size();
      throw ConfigError(msg.str());
    }
    ChargeSession session;
    session.vehicle_id = fields[0];
    if (session.vehicle_id.empty()) {
      std::ostringstream msg;
      msg << "row " << row << ": vehicle_id must be nonempty";
      throw ConfigError(msg.str());
    }
    session.arrival_slot = parse_int_field(fields[1], row, "arrival_slot");
    session.departure_slot =
        parse_int_field(fields[2], row, "departure_slot");
    session.energy_kwh = parse_double_field(fields[3], row, "energy_kwh");
    session.max_rate_kw = parse_double_field(fields[4], row, "max_rate_kw");
    sessions.push_back(std::move(session));
  }
  return sessions;
}

std::string sessions_to_csv(const std::vector<ChargeSession>& sessions) {
  std::string out = kSessionsHeader;
  out += '\n';
  for (const ChargeSession& session : sessions) {
    if (session.vehicle_id.find_first_of(",\"\r\n") != std::string::npos) {
      throw ConfigError("vehicle_id '" + session.vehicle_id +
                        "' contains CSV delimiter characters");
    }
    out += session.vehicle_id;
    out += ',';
    out += std::to_string(session.arrival_slot);
    out += ',';
    out += std::to_string(session.departure_slot);
    out += ',';
    out += format_roundtrip(session.energy_kwh);
    out += ',';
    out += format_roundtrip(session.max_rate_kw);
    out += '\n';
  }
  return out;
}

std::vector<ChargeSession> read_sessions_csv(const std::string& path) {
  return parse_sessions_csv(read_text_file(path));
}

void write_sessions_csv(const std::string& path,
                        const std::vector<ChargeSession>& sessions) {
  write_text_file(path, sessions_to_csv(sessions));
}

std::string matrix_to_csv(const ReductionPotentialMatrix& matrix) {
  std::string out = kMatrixCorner;
  for (int t = 0; t < matrix.cols(); ++t) {
    out += ',';
    out += std::to_string(t);
  }
  out += '\n';
  char cell[32];
  for (int k = 1; k <= matrix.rows(); ++k) {
    out += std::to_string(k);
    for (int t = 0; t < matrix.cols(); ++t) {
      out += ',';
      if (matrix.valid(k, t)) {
        std::snprintf(cell, sizeof(cell), "%.6f", matrix.at(k, t));
        out += cell;
      }
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::string& path,
                      const ReductionPotentialMatrix& matrix) {
  write_text_file(path, matrix_to_csv(matrix));
}

ReductionPotentialMatrix parse_matrix_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) {
    throw ConfigError("matrix CSV is empty");
  }
  const std::vector<std::string> header = split_line(lines[0]);
  if (header[0] != kMatrixCorner) {
    throw ConfigError("matrix CSV corner cell must be '" +
                      std::string(kMatrixCorner) + "', got '" + header[0] +
                      "'");
  }
  const int num_slots = static_cast<int>(header.size()) - 1;
  if (num_slots < 1) {
    throw ConfigError("matrix CSV header names no slot columns");
  }
  for (int t = 0; t < num_slots; ++t) {
    if (header[t + 1] != std::to_string(t)) {
      std::ostringstream msg;
      msg << "matrix CSV header column " << t + 1 << " must be '" << t
          << "', got '" << header[t + 1] << "'";
      throw ConfigError(msg.str());
    }
  }

  ReductionPotentialMatrix matrix;
  matrix.horizon = {num_slots, 1.0};
  matrix.max_delay_slots = static_cast<int>(lines.size()) - 1;
  if (matrix.max_delay_slots < 1) {
    throw ConfigError("matrix CSV has no data rows");
  }
  matrix.values.assign(
      static_cast<std::size_t>(matrix.max_delay_slots) * num_slots,
      std::numeric_limits<double>::quiet_NaN());
  matrix.valid_mask.assign(matrix.values.size(), 0);

  for (int k = 1; k <= matrix.max_delay_slots; ++k) {
    const int row = k + 1;
    const std::vector<std::string> fields = split_line(lines[k]);
    if (static_cast<int>(fields.size()) != num_slots + 1) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << num_slots + 1
          << " fields, got " << fields.size();
      throw ConfigError(msg.str());
    }
    if (parse_int_field(fields[0], row, "window length") != k) {
      std::ostringstream msg;
      msg << "row " << row << ": window length column must be " << k;
      throw ConfigError(msg.str());
    }
    for (int t = 0; t < num_slots; ++t) {
      if (fields[t + 1].empty()) {
        continue;  // masked cell
      }
      const std::size_t index = matrix.index(k, t);
      matrix.values[index] =
          parse_double_field(fields[t + 1], row, "matrix cell");
      matrix.valid_mask[index] = 1;
      if (matrix.values[index] < -1e-9) {
        matrix.has_negative_cells = true;
      }
    }
  }
  return matrix;
}

ReductionPotentialMatrix read_matrix_csv(const std::string& path) {
  return parse_matrix_csv(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  if (stream.bad()) {
    throw IoError("failed while reading '" + path + "'");
  }
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  stream.write(content.data(), static_cast<std::streamsize>(content.size()));
  stream.flush();
  if (!stream) {
    throw IoError("failed while writing '" + path + "'");
  }
}

}  // namespace flexmat
