#include "pan/nn/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "pan/common/csv.hpp"
#include "pan/common/error.hpp"

namespace pan::nn {

void write_checkpoint(std::ostream& out, const MlpSpec& spec, const ParamVector& params) {
  PAN_REQUIRE(params.size() == param_count(spec), "parameter vector does not match spec");
  CsvWriter csv(out, {"input_dim", "output_dim", "depth", "width", "activation", "param_count"});
  csv.row(std::vector<std::string>{std::to_string(spec.input_dim), std::to_string(spec.output_dim),
                                   std::to_string(spec.depth), std::to_string(spec.width),
                                   to_string(spec.activation), std::to_string(params.size())});
  for (Eigen::Index i = 0; i < params.size(); ++i) out << format_double(params(i)) << '\n';
}

Checkpoint read_checkpoint(std::istream& in) {
  const CsvTable table = read_csv(in);
  if (table.rows.empty()) throw ContractViolation("checkpoint is empty");
  Checkpoint cp;
  try {
    cp.spec.input_dim = static_cast<int>(table.number(0, "input_dim"));
    cp.spec.output_dim = static_cast<int>(table.number(0, "output_dim"));
    cp.spec.depth = static_cast<int>(table.number(0, "depth"));
    cp.spec.width = static_cast<int>(table.number(0, "width"));
    cp.spec.activation = activation_from_string(table.rows[0].at(table.column("activation")));
  } catch (const std::logic_error& e) {
    throw ContractViolation(std::string("malformed checkpoint header: ") + e.what());
  }
  const auto count = static_cast<Eigen::Index>(table.number(0, "param_count"));
  if (count != param_count(cp.spec)) throw ContractViolation("checkpoint parameter count mismatch");
  if (static_cast<Eigen::Index>(table.rows.size()) != count + 1) {
    throw ContractViolation("checkpoint has " + std::to_string(table.rows.size() - 1) +
                            " parameter lines, expected " + std::to_string(count));
  }
  cp.params.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    cp.params(i) = std::stod(table.rows[static_cast<std::size_t>(i + 1)].at(0));
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const MlpSpec& spec,
                     const ParamVector& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, spec, params);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace pan::nn
