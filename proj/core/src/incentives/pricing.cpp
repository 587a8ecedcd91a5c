#include "cropsense/incentives.hpp"

#include <algorithm>
#include <limits>

namespace cropsense::incentives {

std::string_view to_string(SchemeId id) noexcept {
    switch (id) {
    case SchemeId::S1: return "S1";
    case SchemeId::S2: return "S2";
    case SchemeId::S3: return "S3";
    case SchemeId::S4: return "S4";
    case SchemeId::S5: return "S5";
    }
    return "";
}

std::optional<SchemeId> parse_scheme(std::string_view text) {
    for (SchemeId id : kSchemes) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

void SchemeConfig::validate() const {
    auto invalid = [this](const std::string& what) {
        throw Error(Errc::ConfigInvalid, "scheme " + std::string(to_string(id)) + ": " + what);
    };
    if (base_price < 0 || increment < 0 || capped_price < 0 || first_batch_lump < 0) invalid("negative amount");
    if (first_batch_size == 0) invalid("first batch size must be positive");
    if (first_batch_lump != base_price * static_cast<Ugx>(first_batch_size)) {
        invalid("first batch lump must equal base price x first batch size");
    }
    if (stages.empty()) invalid("no batch stages");
    if (stages.front().from_ordinal != first_batch_size + 1) {
        invalid("first batch stage must start right after the first batch");
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].batch_size == 0) invalid("batch size must be positive");
        if (i > 0 && stages[i].from_ordinal <= stages[i - 1].from_ordinal) invalid("batch stages must be increasing");
    }
    if (price_cap_ordinal && payment_cap_ordinal && *payment_cap_ordinal < *price_cap_ordinal) {
        invalid("payment cap precedes price cap");
    }
    if (flat_settlement && (flat_settlement->amount < 0 || flat_settlement->threshold == 0)) {
        invalid("flat settlement needs a positive threshold and non-negative amount");
    }
}

SchemeConfig preset(SchemeId id) {
    SchemeConfig s;
    s.id = id;
    switch (id) {
    case SchemeId::S1:
        s.stages = {{21, 40}};
        break;
    case SchemeId::S2:
        s.stages = {{21, 40}, {401, 50}};
        break;
    case SchemeId::S3:
        s.stages = {{21, 40}, {401, 50}};
        s.price_cap_ordinal = 500;
        break;
    case SchemeId::S4:
        s.stages = {{21, 40}, {401, 100}};
        s.price_cap_ordinal = 500;
        s.payment_cap_ordinal = 800;
        break;
    case SchemeId::S5:
        s.stages = {{21, 40}, {401, 100}};
        s.price_cap_ordinal = 500;
        s.payment_cap_ordinal = 800;
        s.flat_settlement = FlatSettlement{500, 200'000};
        break;
    }
    return s;
}

Batch batch_containing(Ordinal k, const SchemeConfig& scheme) {
    if (k < 1) throw Error(Errc::InvalidOrdinal, "ordinal must be >= 1");
    if (k <= scheme.first_batch_size) return Batch{0, 1, scheme.first_batch_size};

    std::uint64_t start = scheme.first_batch_size + 1ULL;
    std::uint64_t index = 1;
    for (std::size_t i = 0; i < scheme.stages.size(); ++i) {
        const std::uint64_t size = scheme.stages[i].batch_size;
        const std::uint64_t next_from = i + 1 < scheme.stages.size() ? scheme.stages[i + 1].from_ordinal
                                                                      : std::numeric_limits<std::uint64_t>::max();
        // Batches of this stage are the ones starting before next_from.
        const std::uint64_t count = start >= next_from ? 0 : (next_from - start + size - 1) / size;
        if (i + 1 == scheme.stages.size() || k < start + count * size) {
            const std::uint64_t j = (k - start) / size;
            const std::uint64_t first = start + j * size;
            return Batch{static_cast<Ordinal>(index + j), static_cast<Ordinal>(first),
                         static_cast<Ordinal>(std::min<std::uint64_t>(first + size - 1, std::numeric_limits<Ordinal>::max()))};
        }
        start += count * size;
        index += count;
    }
    return Batch{};  // unreachable: the last stage is open-ended
}

Ugx report_price(Ordinal k, const SchemeConfig& scheme) {
    if (k < 1) throw Error(Errc::InvalidOrdinal, "ordinal must be >= 1");
    if (scheme.payment_cap_ordinal && k > *scheme.payment_cap_ordinal) return 0;
    if (scheme.price_cap_ordinal && k > *scheme.price_cap_ordinal) return scheme.capped_price;
    if (k <= scheme.first_batch_size) return scheme.base_price;
    return scheme.base_price + scheme.increment * static_cast<Ugx>(batch_containing(k, scheme).index);
}

Ordinal vested_through(Ordinal received, const SchemeConfig& scheme) {
    if (received < scheme.first_batch_size) return 0;
    const auto batch = batch_containing(received, scheme);
    return batch.last == received ? received : batch.first - 1;
}

}  // namespace cropsense::incentives
