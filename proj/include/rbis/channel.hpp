#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbis/rng.hpp"

namespace rbis {

enum class JitterKind { none, gaussian, uniform };

// Reception-timestamp noise per (frame, receiver).
struct JitterDistribution {
    JitterKind kind = JitterKind::none;
    double sigma_us = 0.0;       // gaussian
    double half_width_us = 0.0;  // uniform, symmetric around 0

    double sample(Rng& rng) const;
};

// Delivery model shared by the beacon broadcast and FOLLOW_UP unicasts.
// per_receiver_bias_us models a systematic timestamping shift on one
// reception path; loss is independent per receiver per frame.
struct ChannelModel {
    double base_delay_us = 0.0;
    std::map<std::string, double> per_receiver_bias_us;
    JitterDistribution jitter;
    double loss_prob = 0.0;
};

// One SYNC broadcast. The emitter is the time reference: emissions are
// perfectly periodic and all timing error lives on the reception paths.
struct BeaconEvent {
    std::int64_t seq_k = 0;
    std::int64_t emit_true_us = 0;
    std::int64_t interval_us = 0;
};

// Arrival instant at one receiver, or nullopt if the frame was lost. The
// loss and jitter draws are both taken on every call so the jitter stream
// does not depend on loss outcomes.
std::optional<std::int64_t> deliver_one(std::int64_t send_true_us,
                                        std::string_view receiver,
                                        const ChannelModel& channel, Rng& rng);

// Independent delivery of one beacon to each receiver, in receiver order.
std::vector<std::optional<std::int64_t>> deliver_broadcast(
    const BeaconEvent& beacon, std::span<const std::string> receivers,
    const ChannelModel& channel, NodeRngs& rngs);

// FOLLOW_UP delivery; the payload is data, so this latency can only delay
// pairing, never change an estimate.
std::optional<std::int64_t> deliver_unicast(std::int64_t send_true_us,
                                            std::string_view from,
                                            std::string_view to,
                                            const ChannelModel& channel,
                                            NodeRngs& rngs);

}  // namespace rbis
