#include "rbis/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace rbis {

double JitterDistribution::sample(Rng& rng) const {
    switch (kind) {
        case JitterKind::none:
            return 0.0;
        case JitterKind::gaussian:
            return rng.normal(sigma_us);
        case JitterKind::uniform:
            return (2.0 * rng.uniform01() - 1.0) * half_width_us;
    }
    return 0.0;
}

std::optional<std::int64_t> deliver_one(std::int64_t send_true_us,
                                        std::string_view receiver,
                                        const ChannelModel& channel, Rng& rng) {
    const bool lost = rng.bernoulli(channel.loss_prob);
    const double jitter = channel.jitter.sample(rng);
    if (lost) return std::nullopt;
    double bias = 0.0;
    if (auto it = channel.per_receiver_bias_us.find(std::string(receiver));
        it != channel.per_receiver_bias_us.end())
        bias = it->second;
    const double arrival =
        static_cast<double>(send_true_us) + channel.base_delay_us + bias + jitter;
    return std::llround(arrival);
}

std::vector<std::optional<std::int64_t>> deliver_broadcast(
    const BeaconEvent& beacon, std::span<const std::string> receivers,
    const ChannelModel& channel, NodeRngs& rngs) {
    if (receivers.empty())
        throw std::invalid_argument("broadcast needs at least one receiver");
    std::vector<std::optional<std::int64_t>> arrivals;
    arrivals.reserve(receivers.size());
    for (const auto& node : receivers)
        arrivals.push_back(deliver_one(beacon.emit_true_us, node, channel,
                                       rngs.stream(node, "rx.beacon")));
    return arrivals;
}

std::optional<std::int64_t> deliver_unicast(std::int64_t send_true_us,
                                            std::string_view from,
                                            std::string_view to,
                                            const ChannelModel& channel,
                                            NodeRngs& rngs) {
    if (from == to) throw std::invalid_argument("unicast to self");
    return deliver_one(send_true_us, to, channel, rngs.stream(to, "rx.followup"));
}

}  // namespace rbis
