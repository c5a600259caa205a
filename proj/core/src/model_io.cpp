#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "scsvm/error.hpp"
#include "scsvm/mpm.hpp"

namespace scsvm {

namespace {

template <typename T>
bool parse_number(const std::string& token, T& out) {
  std::string_view view(token);
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  const auto* end = view.data() + view.size();
  const auto [ptr, ec] = std::from_chars(view.data(), end, out);
  return !view.empty() && ec == std::errc{} && ptr == end;
}

}  // namespace

void write_model(const ModelTheta& model, std::ostream& out) {
  const auto m = model.num_features();
  out << fmt::format("{} {}\n", m, model.bias());
  const auto omega = model.omega();
  for (std::size_t j = 0; j < m; ++j) {
    const double w = omega[static_cast<Eigen::Index>(j)];
    if (w != 0.0) out << fmt::format("{} {}\n", j + 1, w);
  }
}

void write_model(const ModelTheta& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write model to '{}'", path.string()));
  write_model(model, out);
  if (!out) throw Error(fmt::format("failed writing model to '{}'", path.string()));
}

ModelTheta read_model(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("empty model file");
  std::istringstream header(line);
  std::string m_token, b_token, extra;
  header >> m_token >> b_token;
  std::size_t m = 0;
  double bias = 0.0;
  if (!parse_number(m_token, m) || !parse_number(b_token, bias) || (header >> extra)) {
    throw ParseError("model header must be 'm b'", line_no);
  }

  Vector theta = Vector::Zero(static_cast<Eigen::Index>(m) + 1);
  theta[static_cast<Eigen::Index>(m)] = bias;
  std::vector<bool> seen(m, false);
  while (next_line()) {
    std::istringstream fields(line);
    std::string idx_token, val_token;
    fields >> idx_token >> val_token;
    std::size_t index = 0;
    double value = 0.0;
    if (!parse_number(idx_token, index) || !parse_number(val_token, value) || (fields >> extra)) {
      throw ParseError("model entries must be 'index value'", line_no);
    }
    if (index < 1 || index > m) throw ParseError(fmt::format("weight index {} outside [1, {}]", index, m), line_no);
    if (seen[index - 1]) throw ParseError(fmt::format("duplicate weight index {}", index), line_no);
    seen[index - 1] = true;
    theta[static_cast<Eigen::Index>(index - 1)] = value;
  }
  return ModelTheta(std::move(theta));
}

ModelTheta read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open model '{}'", path.string()));
  try {
    return read_model(in);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

std::string train_report_to_json(const TrainReport& report) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : report.history) {
    history.push_back({{"k", r.k},
                       {"rho", r.rho},
                       {"F", r.F},
                       {"f", r.f},
                       {"p", r.p},
                       {"f_prog", r.f_prog},
                       {"p_prog", r.p_prog},
                       {"cg_iterations", r.cg_iterations}});
  }
  nlohmann::json j = {{"k", report.outer_iterations},
                      {"cg", report.total_cg},
                      {"time_s", report.wall_time_s},
                      {"termination", to_string(report.termination)},
                      {"converged", report.converged()},
                      {"n", report.n},
                      {"m", report.m},
                      {"s", report.s},
                      {"rho", report.rho},
                      {"solver", report.dense_solver ? "dense" : "cg"},
                      {"projection_tie_at_exit", report.projection_tie_at_exit},
                      {"support_stable_at_exit", report.support_stable_at_exit},
                      {"stationarity_residual", report.stationarity_residual},
                      {"history", std::move(history)}};
  return j.dump(2);
}

}  // namespace scsvm
