#include "etk/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace etk {

Json matrix_to_json(const Mat& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  j["data"] = std::move(data);
  return j;
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data"))
    throw InvalidInput("matrix JSON: expected object with rows, cols, data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw InvalidInput("matrix JSON: rows and cols must be integers");
  const long rows = j["rows"].get<long>();
  const long cols = j["cols"].get<long>();
  if (rows <= 0 || cols <= 0)
    throw InvalidInput("matrix JSON: rows and cols must be positive");
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<long>(data.size()) != rows * cols) {
    std::ostringstream msg;
    msg << "matrix JSON: data has " << data.size() << " entries, expected "
        << rows * cols;
    throw InvalidInput(msg.str());
  }
  Mat m(rows, cols);
  for (long idx = 0; idx < rows * cols; ++idx) {
    const Json& cell = data[idx];
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
        !cell[1].is_number()) {
      std::ostringstream msg;
      msg << "matrix JSON: entry " << idx << " is not an [re, im] pair";
      throw InvalidInput(msg.str());
    }
    const double re = cell[0].get<double>();
    const double im = cell[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      std::ostringstream msg;
      msg << "matrix JSON: entry " << idx << " is not finite";
      throw InvalidInput(msg.str());
    }
    m(idx / cols, idx % cols) = Complex(re, im);
  }
  return m;
}

Json state_to_json(const BipartiteState& s) {
  Json j = matrix_to_json(s.rho);
  j["dims"] = {s.dim_a, s.dim_b};
  return j;
}

BipartiteState state_from_json(const Json& j, const Tolerances& tols) {
  if (!j.is_object() || !j.contains("dims"))
    throw InvalidInput("state JSON: missing dims");
  const Json& dims = j["dims"];
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
      !dims[1].is_number_integer())
    throw InvalidInput("state JSON: dims must be a pair of integers");
  const Mat rho = matrix_from_json(j);
  return make_state(rho, dims[0].get<int>(), dims[1].get<int>(), tols);
}

Json channel_to_json(const ChannelRep& ch) {
  Json j = matrix_to_json(ch.choi);
  j["d_in"] = ch.d_in;
  j["d_out"] = ch.d_out;
  j["normalization"] = "trace-one";
  return j;
}

ChannelRep channel_from_json(const Json& j, const Tolerances& tols) {
  if (!j.is_object() || !j.contains("d_in") || !j.contains("d_out"))
    throw InvalidInput("channel JSON: missing d_in/d_out");
  if (!j["d_in"].is_number_integer() || !j["d_out"].is_number_integer())
    throw InvalidInput("channel JSON: d_in and d_out must be integers");
  if (!j.contains("normalization") || !j["normalization"].is_string() ||
      j["normalization"].get<std::string>() != "trace-one")
    throw InvalidInput("channel JSON: normalization must be \"trace-one\"");
  const Mat choi = matrix_from_json(j);
  return make_channel(choi, j["d_in"].get<int>(), j["d_out"].get<int>(), tols);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace etk
