#include "spvarinf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spvarinf {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = 0;
  size_t b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;  // from_chars rejects an explicit plus
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string sanitize_cell(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path + ": cannot open for writing");
  os << text;
  if (!os) throw std::runtime_error(path + ": write failed");
}

SeriesPanel load_csv(const std::string& path, bool standardize) {
  const std::string text = read_text_file(path);
  if (trim(text).empty()) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() < 2)
    throw std::runtime_error(path + ": no data rows below the header");

  SeriesPanel panel;
  for (const auto& name : split(lines[0], ','))
    panel.names.push_back(trim(name));
  const int N = static_cast<int>(panel.names.size());
  const int T = static_cast<int>(lines.size()) - 1;
  panel.data.resize(T, N);
  for (int t = 0; t < T; ++t) {
    const int file_row = t + 2;  // 1-based, header is row 1
    const std::vector<std::string> cells = split(lines[static_cast<size_t>(t) + 1], ',');
    if (static_cast<int>(cells.size()) != N) {
      std::ostringstream os;
      os << path << ": row " << file_row << ": expected " << N
         << " cells, found " << cells.size();
      throw std::runtime_error(os.str());
    }
    for (int j = 0; j < N; ++j) {
      double v = 0.0;
      if (!parse_double(cells[static_cast<size_t>(j)], v)) {
        std::ostringstream os;
        os << path << ": row " << file_row << ", column " << j + 1
           << ": cannot parse '" << trim(cells[static_cast<size_t>(j)])
           << "' as a number";
        throw std::runtime_error(os.str());
      }
      panel.data(t, j) = v;
    }
  }

  if (standardize) {
    if (T < 2)
      throw std::runtime_error(path + ": need at least 2 rows to standardize");
    panel.means.resize(N);
    panel.sds.resize(N);
    for (int j = 0; j < N; ++j) {
      const double m = panel.data.col(j).mean();
      const double sd = std::sqrt(
          (panel.data.col(j).array() - m).square().sum() / (T - 1));
      if (!(sd > 0.0))
        throw std::runtime_error(path + ": column '" +
                                 panel.names[static_cast<size_t>(j)] +
                                 "' has zero variance, cannot standardize");
      panel.data.col(j) = (panel.data.col(j).array() - m) / sd;
      panel.means(j) = m;
      panel.sds(j) = sd;
    }
    panel.standardized = true;
  }
  return panel;
}

void save_csv(const SeriesPanel& panel, const std::string& path) {
  const int N = panel.N();
  std::ostringstream os;
  const std::vector<std::string> names =
      static_cast<int>(panel.names.size()) == N ? panel.names : default_names(N);
  for (int j = 0; j < N; ++j) os << (j ? "," : "") << names[static_cast<size_t>(j)];
  os << "\n";
  for (int t = 0; t < panel.T(); ++t) {
    for (int j = 0; j < N; ++j)
      os << (j ? "," : "") << format_g17(panel.data(t, j));
    os << "\n";
  }
  write_text_file(path, os.str());
}

std::string model_to_json(const SpvarModel& model) {
  validate(model);
  nlohmann::json j;
  j["orders"] = {{"p", model.orders.p}, {"r", model.orders.r}, {"s", model.orders.s}};
  j["omega"]["lambdas"] = model.omega.lambdas;
  auto etas = nlohmann::json::array();
  for (const auto& e : model.omega.etas) etas.push_back({e[0], e[1]});
  j["omega"]["etas"] = etas;
  auto G = nlohmann::json::array();
  const int N = model.coefs.N;
  for (const auto& mat : model.coefs.mats) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < N; ++i) {
      auto row = nlohmann::json::array();
      for (int c = 0; c < N; ++c) row.push_back(mat(i, c));
      rows.push_back(std::move(row));
    }
    G.push_back(std::move(rows));
  }
  j["G"] = std::move(G);
  j["N"] = N;
  j["names"] = static_cast<int>(model.names.size()) == N ? model.names : default_names(N);
  return j.dump(2) + "\n";
}

SpvarModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("model JSON parse error: ") + e.what());
  }
  try {
    SpvarModel model;
    model.orders.p = j.at("orders").at("p").get<int>();
    model.orders.r = j.at("orders").at("r").get<int>();
    model.orders.s = j.at("orders").at("s").get<int>();
    model.omega.lambdas = j.at("omega").at("lambdas").get<std::vector<double>>();
    for (const auto& e : j.at("omega").at("etas")) {
      if (!e.is_array() || e.size() != 2)
        throw std::runtime_error("each eta must be a [gamma, theta] pair");
      model.omega.etas.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    const int N = j.at("N").get<int>();
    model.coefs.N = N;
    for (const auto& mat : j.at("G")) {
      Eigen::MatrixXd M(N, N);
      if (static_cast<int>(mat.size()) != N)
        throw std::runtime_error("each G entry must have N rows");
      for (int i = 0; i < N; ++i) {
        const auto& row = mat[static_cast<size_t>(i)];
        if (static_cast<int>(row.size()) != N)
          throw std::runtime_error("each G row must have N values");
        for (int c = 0; c < N; ++c) M(i, c) = row[static_cast<size_t>(c)].get<double>();
      }
      model.coefs.mats.push_back(std::move(M));
    }
    if (j.contains("names"))
      model.names = j.at("names").get<std::vector<std::string>>();
    if (static_cast<int>(model.names.size()) != N) model.names = default_names(N);
    validate(model);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model JSON schema error: ") + e.what());
  }
}

void save_model_json(const SpvarModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model));
}

SpvarModel load_model_json(const std::string& path) {
  return model_from_json(read_text_file(path));
}

void save_bic_table_csv(const BicTable& table, const std::string& path) {
  std::ostringstream os;
  os << "p,r,s,d,lambda_g,loss,bic,converged,failed,chosen,error\n";
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const BicRow& r = table.rows[i];
    os << r.orders.p << ',' << r.orders.r << ',' << r.orders.s << ','
       << r.orders.d() << ',' << format_g17(r.lambda_g_used) << ','
       << (r.failed ? "" : format_g17(r.loss)) << ','
       << (r.failed ? "" : format_g17(r.bic)) << ',' << (r.converged ? 1 : 0)
       << ',' << (r.failed ? 1 : 0) << ','
       << (static_cast<int>(i) == table.chosen ? 1 : 0) << ','
       << sanitize_cell(r.error) << "\n";
  }
  write_text_file(path, os.str());
}

void save_granger_csv(const GrangerNetwork& net,
                      const std::vector<std::string>& names,
                      const std::string& path) {
  if (static_cast<int>(names.size()) != net.N)
    throw std::invalid_argument("save_granger_csv: names must have one entry per series");
  std::ostringstream os;
  os << "i,j,to_name,from_name,kind,magnitude,support_k\n";
  for (const auto& e : net.edges) {
    os << e.to + 1 << ',' << e.from + 1 << ','
       << sanitize_cell(names[static_cast<size_t>(e.to)]) << ','
       << sanitize_cell(names[static_cast<size_t>(e.from)]) << ','
       << to_string(e.kind) << ',' << format_g17(e.magnitude) << ',';
    for (size_t k = 0; k < e.support.size(); ++k)
      os << (k ? "|" : "") << e.support[k];
    os << "\n";
  }
  write_text_file(path, os.str());
}

void save_dot(const GrangerNetwork& net, const std::vector<std::string>& names,
              const std::string& path) {
  write_text_file(path, to_dot(net, names));
}

void save_irf_csv(const std::vector<Eigen::MatrixXd>& psis, const std::string& path) {
  std::ostringstream os;
  os << "j,row,col,value\n";
  for (size_t j = 0; j < psis.size(); ++j)
    for (int i = 0; i < psis[j].rows(); ++i)
      for (int c = 0; c < psis[j].cols(); ++c)
        os << j + 1 << ',' << i + 1 << ',' << c + 1 << ','
           << format_g17(psis[j](i, c)) << "\n";
  write_text_file(path, os.str());
}

void save_rolling_csv(const RollingReport& report,
                      const std::vector<std::string>& names,
                      const std::string& path) {
  std::ostringstream os;
  os << "t,failed,l2_error";
  for (const auto& n : names) os << ",forecast_" << sanitize_cell(n);
  for (const auto& n : names) os << ",realized_" << sanitize_cell(n);
  os << "\n";
  const int N = static_cast<int>(names.size());
  for (const auto& s : report.per_step) {
    os << s.t << ',' << (s.failed ? 1 : 0) << ','
       << (s.failed ? "" : format_g17(s.l2_error));
    for (int j = 0; j < N; ++j)
      os << ',' << (s.failed ? "" : format_g17(s.forecast(j)));
    for (int j = 0; j < N; ++j)
      os << ',' << format_g17(s.realized(j));
    os << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace spvarinf
