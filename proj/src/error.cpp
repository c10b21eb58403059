#include "covsel/error.hpp"

namespace covsel {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveOffDiagonal: return "NonPositiveOffDiagonal";
    case Errc::AsymmetricPenalty: return "AsymmetricPenalty";
    case Errc::OverlappingBlocks: return "OverlappingBlocks";
    case Errc::NegativeDiagonalPenalty: return "NegativeDiagonalPenalty";
    case Errc::UncoveredPair: return "UncoveredPair";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyGroup: return "EmptyGroup";
    case Errc::NonPartition: return "NonPartition";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case Errc::DegenerateCovariance: return "DegenerateCovariance";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::TruncationBrokePD: return "TruncationBrokePD";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace covsel
