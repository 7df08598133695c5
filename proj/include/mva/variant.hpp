#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mva {

/// Method selector for the shared objective. PCA aliases the output to the
/// input and weights it by the identity; OPLS keeps the output with identity
/// weighting; CCA whitens the output by (C_YY + eps I)^{-1}.
struct MvaVariant {
  enum class Tag { PCA, CCA, OPLS };

  Tag tag = Tag::OPLS;
  /// Jitter eps for the CCA output whitener. Unset means the default
  /// 1e-8 * trace(C_YY) / m, which keeps the whitener defined for the
  /// rank-deficient covariance of a centered one-hot output.
  std::optional<double> omega_jitter;

  static MvaVariant pca() { return {Tag::PCA, std::nullopt}; }
  static MvaVariant opls() { return {Tag::OPLS, std::nullopt}; }
  static MvaVariant cca(std::optional<double> jitter = std::nullopt) {
    return {Tag::CCA, jitter};
  }

  std::string name() const {
    switch (tag) {
      case Tag::PCA: return "pca";
      case Tag::CCA: return "cca";
      case Tag::OPLS: return "opls";
    }
    return "?";
  }

  static MvaVariant parse(const std::string& s) {
    if (s == "pca") return pca();
    if (s == "cca") return cca();
    if (s == "opls") return opls();
    throw std::invalid_argument("unknown variant '" + s + "' (expected pca|cca|opls)");
  }
};

}  // namespace mva
