// INI-style problem configs.
//
//   [scheme]
//   builtin = balanced4            # or give L/moments explicitly
//   L = 4
//   moments = -1 -1 -1 ; 1 1 -1 ; 1 -1 1 ; -1 1 1
//   gamma_m = pi/100               # plain decimals also accepted
//   magnitudes = 1 1 1 1
//   noise_std = 0.2
//   preprocessor = p91             # builtin name or path to a matrix file
//
//   [difference]                   # alternative: give A directly
//   rows = 1 0 0 ; 0 1/2 0 ; 0 0 1/3
//   scale = 2pi
//
// Moment entries are exact rationals ("p/q", integers, or finite decimals).

#ifndef MULTIVENC_CONFIG_HPP
#define MULTIVENC_CONFIG_HPP

#include <optional>
#include <string>

#include "multivenc/encoding.hpp"

namespace mvenc {

struct ProblemConfig {
    std::optional<EncodingScheme> scheme;
    std::optional<DifferenceSystem> direct;  // from [difference]
    std::optional<Preprocessor> preprocessor;
    std::string path;

    // The scheme's system, or the directly-specified one.
    DifferenceSystem system() const;
    bool has_scheme() const { return scheme.has_value(); }
};

ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config_text(const std::string& text, const std::string& label = "<string>");

// Whitespace/line separated rational matrix file with '#' comments.
RationalMatrix load_matrix_file(const std::string& path);

// Reals with an optional pi factor: "0.25", "pi/100", "2pi", "0.5pi".
double parse_real(const std::string& text);

} // namespace mvenc

#endif
