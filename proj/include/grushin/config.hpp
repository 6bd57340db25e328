#pragma once

#include <string>

namespace grushin {

// (n, m, alpha); y-variables carry dilation weight alpha + 1.
struct GrushinConfig {
  int n = 2;
  int m = 1;
  int alpha = 0;

  int Q() const { return n + m * (alpha + 1); }
  int yweight() const { return alpha + 1; }
  std::string str() const;
  friend bool operator==(const GrushinConfig&, const GrushinConfig&) = default;
};

// Harmonic constructions need n >= 2, m >= 1, alpha >= 0.
void require_harmonic_config(const GrushinConfig& cfg);

}  // namespace grushin
