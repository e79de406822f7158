#include "rbis/units.hpp"

#include <array>
#include <charconv>

namespace rbis {

std::string us_string_of_fs(std::int64_t fs) {
    std::string out;
    std::uint64_t mag;
    if (fs < 0) {
        out.push_back('-');
        mag = static_cast<std::uint64_t>(-(fs + 1)) + 1;  // safe for INT64_MIN
    } else {
        mag = static_cast<std::uint64_t>(fs);
    }
    const std::uint64_t whole = mag / kFsPerUs;
    const std::uint64_t frac = mag % kFsPerUs;

    std::array<char, 24> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), whole);
    out.append(buf.data(), p);

    if (frac != 0) {
        std::array<char, 10> digits{};
        std::uint64_t rest = frac;
        for (int i = 8; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] =
                static_cast<char>('0' + rest % 10);
            rest /= 10;
        }
        int len = 9;
        while (len > 0 && digits[static_cast<std::size_t>(len - 1)] == '0')
            --len;
        out.push_back('.');
        out.append(digits.data(), static_cast<std::size_t>(len));
    }
    return out;
}

}  // namespace rbis
