#include <cmath>
#include <locale>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mormor/eim.hpp"
#include "mormor/greedy.hpp"

namespace mormor {

namespace {

using nlohmann::json;

std::string number(double value) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(17);
  s << value;
  return s.str();
}

// NaN and infinities become null.
json finite_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json finite_array(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(finite_or_null(v));
  return out;
}

double mu_component(const std::vector<double>& mu, std::size_t i) {
  return i < mu.size() ? mu[i] : std::nan("");
}

}  // namespace

void write_report_csv(std::ostream& out, const GreedyReport& report, bool timings) {
  out << "n,mu,sigma,delta_sup";
  for (int k = 1; k <= report.modes; ++k) out << ",lambda_" << k;
  out << ",theta,gamma_eff,seconds\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << number(row.mu) << ',' << number(row.sigma) << ','
        << number(row.delta_sup);
    for (int k = 0; k < report.modes; ++k)
      out << ',' << number(k < static_cast<int>(row.lambdas.size()) ? row.lambdas[k] : 0.0);
    out << ',' << number(row.theta) << ',' << number(row.gamma_eff) << ','
        << number(timings ? row.seconds : 0.0) << '\n';
  }
}

void write_report_json(std::ostream& out, const GreedyReport& report) {
  json doc;
  doc["model"] = report.model;
  doc["selection"] = to_string(report.selection);
  doc["modes"] = report.modes;
  doc["status"] = report.status;
  doc["final_sigma"] = finite_or_null(report.final_sigma);
  doc["warnings"] = report.warnings;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"mu", row.mu},
                    {"index", row.index},
                    {"sigma", finite_or_null(row.sigma)},
                    {"delta_sup", finite_or_null(row.delta_sup)},
                    {"lambdas", finite_array(row.lambdas)},
                    {"theta", finite_or_null(row.theta)},
                    {"gamma_eff", finite_or_null(row.gamma_eff)},
                    {"residual_norm", finite_or_null(row.residual_norm)},
                    {"reduced_error", finite_or_null(row.reduced_error)},
                    {"basis_size", row.basis_size},
                    {"dropped_modes", row.dropped_modes},
                    {"mode_coupling", finite_or_null(row.mode_coupling)},
                    {"seconds", row.seconds}});
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_eim_report_csv(std::ostream& out, const EimReport& report, bool timings) {
  const bool classical = report.method == "eim-classical";
  out << (classical ? "n,mu1,mu2,sigma_hat,sup_error,kappa,lambda_tilde,seconds\n"
                    : "n,mu1,mu2,sigma_hat,theta,kappa,lambda_tilde,eta_bar,seconds\n");
  for (const auto& row : report.rows) {
    out << row.n << ',' << number(mu_component(row.mu, 0)) << ','
        << number(mu_component(row.mu, 1)) << ',' << number(row.sigma_hat) << ',';
    if (classical) {
      out << number(row.sup_error) << ',' << number(row.kappa) << ',' << number(row.lambda_tilde);
    } else {
      out << number(row.theta) << ',' << number(row.kappa) << ',' << number(row.lambda_tilde)
          << ',' << number(row.eta_bar);
    }
    out << ',' << number(timings ? row.seconds : 0.0) << '\n';
  }
}

void write_eim_report_json(std::ostream& out, const EimReport& report) {
  json doc;
  doc["method"] = report.method;
  doc["modes"] = report.modes;
  doc["status"] = report.status;
  doc["final_sigma_hat"] = finite_or_null(report.final_sigma_hat);
  doc["warnings"] = report.warnings;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"index", row.index},
                    {"mu", row.mu},
                    {"sigma_hat", finite_or_null(row.sigma_hat)},
                    {"sup_error", finite_or_null(row.sup_error)},
                    {"lambdas", finite_array(row.lambdas)},
                    {"theta", finite_or_null(row.theta)},
                    {"kappa", finite_or_null(row.kappa)},
                    {"lambda_tilde", finite_or_null(row.lambda_tilde)},
                    {"eta_bar", finite_or_null(row.eta_bar)},
                    {"size", row.size},
                    {"skipped_modes", row.skipped_modes},
                    {"seconds", row.seconds}});
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_interpolant_json(std::ostream& out, const EimInterpolant& itp,
                            const std::function<std::vector<double>(Eigen::Index)>& coordinates) {
  json doc;
  json points = json::array();
  json indices = json::array();
  for (Eigen::Index p : itp.points()) {
    indices.push_back(p);
    points.push_back(coordinates(p));
  }
  doc["size"] = itp.size();
  doc["candidate_count"] = itp.candidate_count();
  doc["point_indices"] = std::move(indices);
  doc["points"] = std::move(points);
  json b = json::array();
  for (Eigen::Index i = 0; i < itp.size(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < itp.size(); ++j) row.push_back(itp.matrix()(i, j));
    b.push_back(std::move(row));
  }
  doc["B"] = std::move(b);
  json q = json::array();
  for (Eigen::Index j = 0; j < itp.size(); ++j) {
    json col = json::array();
    for (Eigen::Index i = 0; i < itp.candidate_count(); ++i) col.push_back(itp.basis()(i, j));
    q.push_back(std::move(col));
  }
  doc["q"] = std::move(q);
  out << doc.dump(2) << '\n';
}

}  // namespace mormor
