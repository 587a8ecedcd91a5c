#include "cropsense/incentives.hpp"

namespace cropsense::incentives {

namespace {

Ordinal stage_size_at(Ordinal start, const SchemeConfig& scheme) {
    Ordinal size = scheme.stages.front().batch_size;
    for (const auto& stage : scheme.stages) {
        if (stage.from_ordinal <= start) size = stage.batch_size;
    }
    return size;
}

/// Ordinals [1, n] with n the longest prefix received on or before `day`.
Ordinal prefix_received_by(std::span<const PricedReport> history, Date day) {
    Ordinal n = 0;
    for (const auto& r : history) {
        if (day_of(r.received_at) > day) break;
        ++n;
    }
    return n;
}

}  // namespace

Period week_period(Date monday) { return Period{monday, monday + std::chrono::days{6}}; }

std::string PayoutStatement::idempotency_key() const {
    return agent_id + "/" + format_date(period.start) + "/" + format_date(period.end);
}

PayoutStatement compute_payout(std::string_view agent_id, std::span<const PricedReport> history, const Period& period,
                               const SchemeBook& book) {
    if (period.end < period.start) throw Error(Errc::InvalidPeriod, "period ends before it starts");
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].ordinal != i + 1) {
            throw Error(Errc::HistoryGap, "agent " + std::string(agent_id) + ": expected ordinal " +
                                              std::to_string(i + 1) + ", found " +
                                              std::to_string(history[i].ordinal));
        }
    }

    PayoutStatement st;
    st.agent_id = std::string(agent_id);
    st.period = period;
    st.scheme_id = book.scheme_on(period.end).id;

    const Ordinal n_before = prefix_received_by(history, period.start - std::chrono::days{1});
    const Ordinal n_end = prefix_received_by(history, period.end);
    st.reports_in_period = n_end - n_before;

    auto scheme_for = [&](Ordinal k) -> const SchemeConfig& {
        return book.scheme_on(day_of(history[k - 1].received_at));
    };

    // Walk batch boundaries up to the period end.
    Ordinal vested_before = 0;
    Ordinal vested_end = 0;
    if (n_end > 0) {
        Ordinal last = scheme_for(1).first_batch_size;
        while (last <= n_end) {
            if (last <= n_before) vested_before = last;
            vested_end = last;
            const Ordinal next_start = last + 1;
            if (next_start > n_end) break;
            last += stage_size_at(next_start, scheme_for(next_start));
        }
    }
    st.carried_over = n_end - vested_end;
    if (vested_end <= vested_before) return st;
    st.vested = OrdinalRange{vested_before + 1, vested_end};

    const SchemeConfig* flat_scheme = nullptr;
    for (Ordinal k = vested_before + 1; k <= vested_end; ++k) {
        const auto& scheme = scheme_for(k);
        if (k <= scheme.first_batch_size) {
            if (k == scheme.first_batch_size) {
                st.amount += scheme.first_batch_lump;
                st.amount_by_scheme[scheme.id] += scheme.first_batch_lump;
            }
            continue;
        }
        if (scheme.flat_settlement && k > n_before + scheme.flat_settlement->threshold) {
            if (flat_scheme == nullptr) flat_scheme = &scheme;
            continue;
        }
        const Ugx price = report_price(k, scheme);
        st.amount += price;
        st.amount_by_scheme[scheme.id] += price;
    }
    if (flat_scheme != nullptr) {
        st.flat_settlement_applied = true;
        st.amount += flat_scheme->flat_settlement->amount;
        st.amount_by_scheme[flat_scheme->id] += flat_scheme->flat_settlement->amount;
    }
    return st;
}

}  // namespace cropsense::incentives
