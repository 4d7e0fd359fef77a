#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ocular/eye_state.hpp"

namespace ocular {

struct FlaggedState {
    EyeState state = EyeState::Open;
    bool blink = false;
};

/// round(0.4 s * frame_rate)
int default_max_blink_frames(double frame_rate);

/// Flags every maximal non-Open run that has Open on both sides and is
/// shorter than max_blink_frames.
std::vector<FlaggedState> blink_filter(const std::vector<EyeState>& raw, double frame_rate, int max_blink_frames = -1);

struct PerclosSample {
    int minute = 0;       ///< window end, in whole minutes
    long end_frame = 0;   ///< exclusive
    double percent = 0.0;
};

/// Sliding three-minute P3 accumulator for one stream. Emits a value at the
/// end of minute 3 and after every further minute.
class PerclosWindow {
public:
    explicit PerclosWindow(double frame_rate, double window_seconds = 180.0, double step_seconds = 60.0);

    std::optional<PerclosSample> push(const FlaggedState& frame);

    long window_frames() const { return window_; }

private:
    double frame_rate_;
    long window_;
    long step_;
    long frames_ = 0;
    long closed_in_window_ = 0;
    std::vector<std::uint8_t> ring_;
};

std::vector<PerclosSample> perclos_p3(const std::vector<FlaggedState>& stream, double frame_rate);

}  // namespace ocular
