#pragma once

/**
 * @file error.hpp
 * @brief Error codes and the single exception type thrown by the library.
 *
 * Negative mathematical verdicts (a failed certificate, a rational p_x) are
 * values, not exceptions.  Exceptions are reserved for violated
 * preconditions and numerical breakdowns.
 */

#include <stdexcept>
#include <string>

namespace sixcyl {

enum class errc {
    degenerate_clock_angle,
    gap_out_of_range,
    polar_degeneracy,
    parameter_out_of_range,
    nonfinite_evaluation,
    inconclusive,
    not_on_locus,
    closed_form_pole,
    field_mismatch,
    invalid_argument,
};

inline const char* to_string(errc code) noexcept {
    switch (code) {
    case errc::degenerate_clock_angle: return "degenerate clock angle";
    case errc::gap_out_of_range: return "gap out of range";
    case errc::polar_degeneracy: return "polar degeneracy";
    case errc::parameter_out_of_range: return "parameter out of range";
    case errc::nonfinite_evaluation: return "nonfinite evaluation";
    case errc::inconclusive: return "inconclusive";
    case errc::not_on_locus: return "not on equal-distance locus";
    case errc::closed_form_pole: return "closed-form pole";
    case errc::field_mismatch: return "field mismatch";
    case errc::invalid_argument: return "invalid argument";
    }
    return "unknown error";
}

class error : public std::runtime_error {
public:
    explicit error(errc code, const std::string& detail = {})
        : std::runtime_error(detail.empty() ? std::string(to_string(code))
                                            : std::string(to_string(code)) + ": " + detail),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace sixcyl
