#pragma once

#include <string>

#include "spvarinf/diagnostics.hpp"
#include "spvarinf/forecast.hpp"
#include "spvarinf/selection.hpp"

namespace spvarinf {

// 17-significant-digit decimal form (round-trips doubles exactly).
std::string format_g17(double v);

// CSV with one header row; numeric body. Parse errors carry row/column
// locations. standardize subtracts column means and divides by sample sds
// (zero-variance columns are an error naming the column).
SeriesPanel load_csv(const std::string& path, bool standardize = false);
void save_csv(const SeriesPanel& panel, const std::string& path);

// Model JSON: {"orders":{"p","r","s"},"omega":{"lambdas":[...],
// "etas":[[gamma,theta],...]},"G":[[[...]],...],"N":...,"names":[...]}.
std::string model_to_json(const SpvarModel& model);
SpvarModel model_from_json(const std::string& text);
void save_model_json(const SpvarModel& model, const std::string& path);
SpvarModel load_model_json(const std::string& path);

void save_bic_table_csv(const BicTable& table, const std::string& path);
void save_granger_csv(const GrangerNetwork& net,
                      const std::vector<std::string>& names,
                      const std::string& path);
void save_dot(const GrangerNetwork& net, const std::vector<std::string>& names,
              const std::string& path);
void save_irf_csv(const std::vector<Eigen::MatrixXd>& psis,
                  const std::string& path);
void save_rolling_csv(const RollingReport& report,
                      const std::vector<std::string>& names,
                      const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace spvarinf
