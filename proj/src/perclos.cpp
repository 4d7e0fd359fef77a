#include "ocular/perclos.hpp"

#include <cmath>

namespace ocular {

int default_max_blink_frames(double frame_rate) {
    if (!(frame_rate > 0.0)) throw InvalidArgument("frame rate must be positive");
    return static_cast<int>(std::lround(0.4 * frame_rate));
}

std::vector<FlaggedState> blink_filter(const std::vector<EyeState>& raw, double frame_rate, int max_blink_frames) {
    if (max_blink_frames < 0) max_blink_frames = default_max_blink_frames(frame_rate);
    std::vector<FlaggedState> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i].state = raw[i];
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] == EyeState::Open) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw.size() && raw[j] != EyeState::Open) ++j;
        const bool bracketed = i > 0 && j < raw.size();
        if (bracketed && static_cast<long>(j - i) < max_blink_frames)
            for (std::size_t k = i; k < j; ++k) out[k].blink = true;
        i = j;
    }
    return out;
}

PerclosWindow::PerclosWindow(double frame_rate, double window_seconds, double step_seconds)
    : frame_rate_(frame_rate) {
    if (!(frame_rate > 0.0)) throw InvalidArgument("frame rate must be positive");
    window_ = std::lround(frame_rate * window_seconds);
    step_ = std::lround(frame_rate * step_seconds);
    if (window_ < 1 || step_ < 1) throw InvalidArgument("PERCLOS window and step must span at least one frame");
    ring_.assign(static_cast<std::size_t>(window_), 0);
}

std::optional<PerclosSample> PerclosWindow::push(const FlaggedState& frame) {
    const std::uint8_t counted = (frame.state != EyeState::Open && !frame.blink) ? 1 : 0;
    auto& slot = ring_[static_cast<std::size_t>(frames_ % window_)];
    closed_in_window_ += counted - slot;
    slot = counted;
    ++frames_;
    if (frames_ < window_ || (frames_ - window_) % step_ != 0) return std::nullopt;
    PerclosSample s;
    s.end_frame = frames_;
    s.minute = static_cast<int>(std::lround(frames_ / (frame_rate_ * 60.0)));
    s.percent = 100.0 * static_cast<double>(closed_in_window_) / static_cast<double>(window_);
    return s;
}

std::vector<PerclosSample> perclos_p3(const std::vector<FlaggedState>& stream, double frame_rate) {
    PerclosWindow window(frame_rate);
    std::vector<PerclosSample> out;
    for (const auto& f : stream)
        if (auto s = window.push(f)) out.push_back(*s);
    return out;
}

}  // namespace ocular
