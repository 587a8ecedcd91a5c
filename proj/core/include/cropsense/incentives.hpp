#pragma once

#include "cropsense/error.hpp"
#include "cropsense/time.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cropsense::incentives {

/// Ugandan shillings. Mobile money has no fractional unit.
using Ugx = std::int64_t;
using Ordinal = std::uint32_t;

enum class SchemeId { S1, S2, S3, S4, S5 };

inline constexpr std::array<SchemeId, 5> kSchemes{SchemeId::S1, SchemeId::S2, SchemeId::S3, SchemeId::S4, SchemeId::S5};

std::string_view to_string(SchemeId id) noexcept;
std::optional<SchemeId> parse_scheme(std::string_view text);

/// From `from_ordinal` on, batches that *start* at or after it have `batch_size`
/// reports. A batch that started under an earlier stage keeps its size.
struct BatchStage {
    Ordinal from_ordinal = 21;
    Ordinal batch_size = 40;

    friend bool operator==(const BatchStage&, const BatchStage&) = default;
};

struct FlatSettlement {
    Ordinal threshold = 500;  // reports within one payment period
    Ugx amount = 200'000;

    friend bool operator==(const FlatSettlement&, const FlatSettlement&) = default;
};

struct SchemeConfig {
    SchemeId id = SchemeId::S1;
    Ugx base_price = 250;
    Ordinal first_batch_size = 20;
    Ugx first_batch_lump = 5'000;
    Ugx increment = 25;  // per completed post-lump batch
    std::vector<BatchStage> stages{{21, 40}};
    std::optional<Ordinal> price_cap_ordinal;
    Ugx capped_price = 500;
    std::optional<Ordinal> payment_cap_ordinal;
    std::optional<FlatSettlement> flat_settlement;

    /// Throws ConfigInvalid: lump != base * first batch, unsorted or
    /// overlapping stages, first stage not right after the lump batch, zero
    /// sizes, negative money.
    void validate() const;

    friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

/// The five historical schemes.
SchemeConfig preset(SchemeId id);

/// A vesting/pricing batch. Index 0 is the lump batch [1, first_batch_size].
struct Batch {
    Ordinal index = 0;
    Ordinal first = 1;
    Ordinal last = 1;

    friend bool operator==(const Batch&, const Batch&) = default;
};

/// Batch containing ordinal k under the scheme's own layout. Throws
/// InvalidOrdinal for k < 1.
Batch batch_containing(Ordinal k, const SchemeConfig& scheme);

/// Per-report price. Base price through the lump batch, then base + increment
/// x batch index; a flat capped_price past price_cap_ordinal; zero past
/// payment_cap_ordinal. Throws InvalidOrdinal for k < 1.
Ugx report_price(Ordinal k, const SchemeConfig& scheme);

// ---------------------------------------------------------------------------

struct ScheduleEntry {
    Date effective;
    SchemeId scheme = SchemeId::S1;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Scheme configs plus the dates they take effect.
class SchemeBook {
public:
    /// Throws ConfigInvalid for non-increasing dates, an empty schedule, or a
    /// scheduled scheme without a config.
    SchemeBook(std::vector<SchemeConfig> schemes, std::vector<ScheduleEntry> schedule, Ugx transfer_fee = 500);

    /// The shipped preset: S1 from 2018-04-16, S2 2018-06-01, S3 2018-08-01,
    /// S4 2018-09-01, S5 2018-11-16; transfer fee 500.
    static SchemeBook reference_default();
    /// One scheme in force from `start` onwards.
    static SchemeBook single(SchemeConfig scheme, Date start = Date{});

    /// Throws InvalidPeriod for dates before the first entry.
    const SchemeConfig& scheme_on(Date d) const;
    const SchemeConfig& config(SchemeId id) const;
    bool covers(Date d) const noexcept { return !schedule_.empty() && schedule_.front().effective <= d; }

    const std::vector<ScheduleEntry>& schedule() const noexcept { return schedule_; }
    const std::vector<SchemeConfig>& schemes() const noexcept { return schemes_; }
    Ugx transfer_fee() const noexcept { return transfer_fee_; }

private:
    std::vector<SchemeConfig> schemes_;
    std::vector<ScheduleEntry> schedule_;
    Ugx transfer_fee_;
};

SchemeBook read_scheme_book_json(std::istream& in);
void write_scheme_book_json(std::ostream& out, const SchemeBook& book);

// ---------------------------------------------------------------------------

/// An accepted report as the payout engine sees it.
struct PricedReport {
    Ordinal ordinal = 0;
    Timestamp received_at{};
};

/// Inclusive payment period [start, end].
struct Period {
    Date start;
    Date end;

    friend bool operator==(const Period&, const Period&) = default;
};

/// Monday-to-Sunday week starting at `monday`.
Period week_period(Date monday);

enum class ReceiptStatus { Paid, Failed, Pending };
std::string_view to_string(ReceiptStatus s) noexcept;

struct Receipt {
    std::string idempotency_key;
    std::string provider_txn_id;
    ReceiptStatus status = ReceiptStatus::Pending;
    Ugx amount = 0;
    Ugx fee = 0;
    std::optional<Errc> failure;
    int attempts = 0;
};

struct OrdinalRange {
    Ordinal first = 0;
    Ordinal last = 0;

    friend bool operator==(const OrdinalRange&, const OrdinalRange&) = default;
};

struct PayoutStatement {
    std::string agent_id;
    Period period;
    Ordinal reports_in_period = 0;
    std::optional<OrdinalRange> vested;  // newly vested this period
    Ugx amount = 0;
    Ordinal carried_over = 0;           // received but unvested at period end
    SchemeId scheme_id = SchemeId::S1;  // in force on the period's last day
    std::map<SchemeId, Ugx> amount_by_scheme;
    bool flat_settlement_applied = false;
    std::optional<Receipt> disbursement;

    std::string idempotency_key() const;
};

/// Vested payout for one agent over one period.
///
/// `history` is the agent's whole accepted sequence (ordinals 1..n in order;
/// HistoryGap otherwise). Reports received after the period end are ignored.
/// Batches vest when their last report is received; a batch vests in this
/// period when that happens inside it. The lump batch pays first_batch_lump;
/// other reports pay report_price under the scheme in force on their own
/// receipt date. A batch's size comes from the scheme in force when its first
/// report was received. Under a scheme with flat settlement, vested reports
/// beyond the threshold-th report of the period are replaced by one flat
/// amount.
PayoutStatement compute_payout(std::string_view agent_id, std::span<const PricedReport> history, const Period& period,
                               const SchemeBook& book);

/// Highest ordinal that has vested once `received` reports are in, for a
/// history received entirely under one scheme.
Ordinal vested_through(Ordinal received, const SchemeConfig& scheme);

// ---------------------------------------------------------------------------

struct TransferRequest {
    std::string idempotency_key;
    std::string account;
    Ugx amount = 0;
    Ugx fee = 0;
};

struct TransferResult {
    ReceiptStatus status = ReceiptStatus::Failed;
    std::string provider_txn_id;
    std::optional<Errc> failure;  // AccountNotFound, ProviderUnavailable, InsufficientFloat
};

/// Mobile-money rail. Implementations must be callable from several threads.
class PayoutClient {
public:
    virtual ~PayoutClient() = default;
    virtual TransferResult transfer(const TransferRequest& request) = 0;
};

/// Deterministic in-process stand-in for a mobile-money provider: a float
/// (remaining campaign budget) debited by amount + fee, a seeded failure rate,
/// optional latency, and an optional whitelist of known accounts.
class SimulatedPayoutClient final : public PayoutClient {
public:
    struct Options {
        Ugx float_balance = 0;
        double failure_rate = 0.0;  // ProviderUnavailable probability per call
        std::chrono::microseconds latency{0};
        std::uint64_t seed = 1;
        std::optional<std::vector<std::string>> known_accounts;
    };

    explicit SimulatedPayoutClient(Options options);
    ~SimulatedPayoutClient() override;

    TransferResult transfer(const TransferRequest& request) override;

    Ugx remaining_float() const;
    std::size_t calls() const;
    std::size_t successful_transfers() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

struct SpendSummary {
    Ugx total = 0;  // sum of Paid amounts
    Ugx fees = 0;   // transfer fees on Paid receipts
    std::map<std::string, Ugx> per_agent;
    std::map<SchemeId, Ugx> per_scheme;
};

/// Payout statements and their receipts, with exactly-once disbursement per
/// idempotency key.
class PayoutLedger {
public:
    explicit PayoutLedger(Ugx transfer_fee = 500) : transfer_fee_(transfer_fee) {}

    PayoutLedger(const PayoutLedger&) = delete;
    PayoutLedger& operator=(const PayoutLedger&) = delete;

    /// Adds or replaces the statement for its idempotency key. A statement
    /// that already has a Paid receipt is never replaced.
    void record(const PayoutStatement& statement);

    /// Sends the statement's amount to `account` unless a Paid receipt exists
    /// for its key, in which case that receipt is returned without calling the
    /// provider. Retries after Failed or Pending reuse the key. Calls for one
    /// key are serialized; distinct keys proceed concurrently.
    /// Throws InvalidAmount when amount <= 0.
    Receipt disburse(const PayoutStatement& statement, std::string_view account, PayoutClient& client);

    std::optional<Receipt> receipt(std::string_view idempotency_key) const;
    std::vector<PayoutStatement> statements() const;  // with receipts attached
    std::size_t paid_count() const;

    void write_csv(std::ostream& out) const;

private:
    Ugx transfer_fee_;
    mutable std::mutex mutex_;
    std::vector<PayoutStatement> statements_;
    std::unordered_map<std::string, std::size_t> by_key_;
    std::unordered_map<std::string, Receipt> receipts_;
    std::unordered_map<std::string, std::unique_ptr<std::mutex>> key_locks_;

    std::mutex& lock_for(const std::string& key);
};

/// Sums Paid receipts. Per-scheme totals split each paid statement by
/// amount_by_scheme.
SpendSummary campaign_spend(std::span<const PayoutStatement> statements);

/// agent_id,period_start,period_end,reports,amount,scheme,receipt_status
void write_ledger_csv(std::ostream& out, std::span<const PayoutStatement> statements);

}  // namespace cropsense::incentives
