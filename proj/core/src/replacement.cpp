#include "urnlab/replacement.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "urnlab/error.hpp"

namespace urnlab {

ReplacementSpec ReplacementSpec::validated(Matrix matrix, Vec initial) {
  if (matrix.empty() || !matrix.square()) {
    throw InputError("shape", "replacement matrix must be square and nonempty");
  }
  const std::size_t d = matrix.rows();
  if (initial.size() != d) {
    throw InputError("shape", "initial composition length does not match the matrix");
  }
  if (!matrix.all_finite()) {
    throw InputError("nonfinite", "replacement matrix has nonfinite entries");
  }
  for (double e : matrix.entries()) {
    if (e < 0.0) {
      throw InputError("negative-entry", "replacement matrix has negative entries");
    }
  }

  for (std::size_t r = 0; r < d; ++r) {
    double s = 0.0;
    for (double e : matrix.row(r)) s += e;
    if (std::abs(s - 1.0) > kRowSumTol) {
      std::ostringstream msg;
      msg << "row " << (r + 1) << " sums to " << s << "; rows must sum to 1 within "
          << kRowSumTol;
      throw InputError("unbalanced-rows", msg.str());
    }
    for (double& e : matrix.row(r)) e /= s;  // exact zeros stay exact
  }

  double c0 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::isfinite(initial[i]) || initial[i] <= 0.0) {
      throw InputError("initial-nonpositive",
                       "initial composition entries must be strictly positive");
    }
    c0 += initial[i];
  }
  if (std::abs(c0 - 1.0) > kInitialSumTol) {
    std::ostringstream msg;
    msg << "initial composition sums to " << c0 << "; must sum to 1 within "
        << kInitialSumTol;
    throw InputError("initial-unnormalized", msg.str());
  }

  return ReplacementSpec(std::move(matrix), std::move(initial));
}

Vec uniform_initial(std::size_t colors) {
  return Vec(colors, 1.0 / static_cast<double>(colors));
}

ReplacementSpec spec_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw InputError("parse", "expected a JSON object with a \"matrix\" array");
  }

  const auto& rows = doc["matrix"];
  const std::size_t d = rows.size();
  Matrix m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    if (!rows[r].is_array() || rows[r].size() != d) {
      throw InputError("shape", "\"matrix\" must be a square array of number rows");
    }
    for (std::size_t c = 0; c < d; ++c) {
      if (!rows[r][c].is_number()) {
        throw InputError("parse", "matrix entries must be numbers");
      }
      m(r, c) = rows[r][c].get<double>();
    }
  }

  Vec initial;
  if (doc.contains("initial") && !doc["initial"].is_null()) {
    if (!doc["initial"].is_array()) {
      throw InputError("parse", "\"initial\" must be an array of numbers");
    }
    for (const auto& v : doc["initial"]) {
      if (!v.is_number()) throw InputError("parse", "initial entries must be numbers");
      initial.push_back(v.get<double>());
    }
  } else {
    initial = uniform_initial(d);
  }
  return ReplacementSpec::validated(std::move(m), std::move(initial));
}

ReplacementSpec spec_from_csv_text(const std::string& text) {
  std::vector<Vec> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Vec row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InputError("parse", "invalid CSV cell: \"" + cell + "\"");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("parse", "empty CSV matrix");
  const std::size_t d = rows.size();
  Matrix m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    if (rows[r].size() != d) {
      throw InputError("shape", "CSV matrix must be square");
    }
    for (std::size_t c = 0; c < d; ++c) m(r, c) = rows[r][c];
  }
  return ReplacementSpec::validated(std::move(m), uniform_initial(d));
}

ReplacementSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("parse", "cannot open input file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw InputError("parse", "input file is empty: " + path);
  }
  if (text[first] == '{') return spec_from_json_text(text);
  return spec_from_csv_text(text);
}

}  // namespace urnlab
