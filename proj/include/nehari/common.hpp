#pragma once

#include <random>
#include <stdexcept>
#include <string>

namespace nehari {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid grid/model/run configuration (CLI exit code 4).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input the operation is undefined for (e.g. the zero field where a
/// quotient with I2(u) > 0 is required).
struct degenerate_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The structural hypotheses the method relies on do not hold for the given
/// model/parameters (e.g. no root of the fibering equation within the
/// bracket cap). CLI exit code 2.
struct hypothesis_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation requested on a model that does not define it
/// (e.g. the NGRQ quantities on the Kirchhoff path).
struct not_applicable : std::logic_error {
  using std::logic_error::logic_error;
};

using Rng = std::mt19937_64;

}  // namespace nehari
