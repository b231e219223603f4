#pragma once

#include <filesystem>
#include <iosfwd>

#include "pan/nn/mlp.hpp"

namespace pan::nn {

struct Checkpoint {
  MlpSpec spec;
  ParamVector params;
};

// Text format, LF line endings:
//   input_dim,output_dim,depth,width,activation,param_count
//   <values of the above>
//   one parameter per line, 17 significant digits, flat layout order
void write_checkpoint(std::ostream& out, const MlpSpec& spec, const ParamVector& params);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const MlpSpec& spec,
                     const ParamVector& params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pan::nn
