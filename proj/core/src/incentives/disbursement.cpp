#include "cropsense/csv.hpp"
#include "cropsense/incentives.hpp"

#include <cstdio>
#include <ostream>
#include <random>
#include <set>
#include <thread>

namespace cropsense::incentives {

std::string_view to_string(ReceiptStatus s) noexcept {
    switch (s) {
    case ReceiptStatus::Paid: return "Paid";
    case ReceiptStatus::Failed: return "Failed";
    case ReceiptStatus::Pending: return "Pending";
    }
    return "";
}

struct SimulatedPayoutClient::State {
    std::mutex mutex;
    Options options;
    Ugx float_balance;
    std::mt19937_64 rng;
    std::size_t calls = 0;
    std::size_t successes = 0;
    std::optional<std::set<std::string>> known;
    std::unordered_map<std::string, std::string> settled;  // idempotency key -> txn id

    explicit State(Options o) : options(std::move(o)), float_balance(options.float_balance), rng(options.seed) {
        if (options.known_accounts) known.emplace(options.known_accounts->begin(), options.known_accounts->end());
    }
};

SimulatedPayoutClient::SimulatedPayoutClient(Options options) : state_(std::make_unique<State>(std::move(options))) {}

SimulatedPayoutClient::~SimulatedPayoutClient() = default;

TransferResult SimulatedPayoutClient::transfer(const TransferRequest& request) {
    if (state_->options.latency.count() > 0) std::this_thread::sleep_for(state_->options.latency);
    std::lock_guard lock(state_->mutex);
    ++state_->calls;
    TransferResult result;
    if (auto it = state_->settled.find(request.idempotency_key); it != state_->settled.end()) {
        result.status = ReceiptStatus::Paid;
        result.provider_txn_id = it->second;
        return result;
    }
    if (state_->known && !state_->known->contains(request.account)) {
        result.failure = Errc::AccountNotFound;
        return result;
    }
    if (state_->options.failure_rate > 0.0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(state_->rng) < state_->options.failure_rate) {
            result.failure = Errc::ProviderUnavailable;
            return result;
        }
    }
    const Ugx debit = request.amount + request.fee;
    if (debit > state_->float_balance) {
        result.failure = Errc::InsufficientFloat;
        return result;
    }
    state_->float_balance -= debit;
    ++state_->successes;
    char txn[32];
    std::snprintf(txn, sizeof txn, "SIM-%08zu", state_->successes);
    result.status = ReceiptStatus::Paid;
    result.provider_txn_id = txn;
    state_->settled.emplace(request.idempotency_key, result.provider_txn_id);
    return result;
}

Ugx SimulatedPayoutClient::remaining_float() const {
    std::lock_guard lock(state_->mutex);
    return state_->float_balance;
}

std::size_t SimulatedPayoutClient::calls() const {
    std::lock_guard lock(state_->mutex);
    return state_->calls;
}

std::size_t SimulatedPayoutClient::successful_transfers() const {
    std::lock_guard lock(state_->mutex);
    return state_->successes;
}

// ---------------------------------------------------------------------------

std::mutex& PayoutLedger::lock_for(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto& slot = key_locks_[key];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

void PayoutLedger::record(const PayoutStatement& statement) {
    const auto key = statement.idempotency_key();
    std::lock_guard lock(mutex_);
    if (auto it = by_key_.find(key); it != by_key_.end()) {
        auto r = receipts_.find(key);
        if (r != receipts_.end() && r->second.status == ReceiptStatus::Paid) return;
        statements_[it->second] = statement;
        return;
    }
    by_key_.emplace(key, statements_.size());
    statements_.push_back(statement);
}

Receipt PayoutLedger::disburse(const PayoutStatement& statement, std::string_view account, PayoutClient& client) {
    if (statement.amount <= 0) {
        throw Error(Errc::InvalidAmount, "statement " + statement.idempotency_key() + " has nothing to pay");
    }
    const auto key = statement.idempotency_key();
    std::lock_guard key_lock(lock_for(key));

    int attempts = 0;
    {
        std::lock_guard lock(mutex_);
        if (auto it = receipts_.find(key); it != receipts_.end()) {
            if (it->second.status == ReceiptStatus::Paid) return it->second;
            attempts = it->second.attempts;
        }
        if (!by_key_.contains(key)) {
            by_key_.emplace(key, statements_.size());
            statements_.push_back(statement);
        }
    }

    const auto result = client.transfer(TransferRequest{key, std::string(account), statement.amount, transfer_fee_});
    Receipt receipt;
    receipt.idempotency_key = key;
    receipt.provider_txn_id = result.provider_txn_id;
    receipt.status = result.status;
    receipt.amount = statement.amount;
    receipt.fee = transfer_fee_;
    receipt.failure = result.failure;
    receipt.attempts = attempts + 1;

    std::lock_guard lock(mutex_);
    receipts_[key] = receipt;
    return receipt;
}

std::optional<Receipt> PayoutLedger::receipt(std::string_view idempotency_key) const {
    std::lock_guard lock(mutex_);
    auto it = receipts_.find(std::string(idempotency_key));
    if (it == receipts_.end()) return std::nullopt;
    return it->second;
}

std::vector<PayoutStatement> PayoutLedger::statements() const {
    std::lock_guard lock(mutex_);
    std::vector<PayoutStatement> out = statements_;
    for (auto& s : out) {
        if (auto it = receipts_.find(s.idempotency_key()); it != receipts_.end()) s.disbursement = it->second;
    }
    return out;
}

std::size_t PayoutLedger::paid_count() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [_, r] : receipts_) n += r.status == ReceiptStatus::Paid;
    return n;
}

void PayoutLedger::write_csv(std::ostream& out) const {
    const auto all = statements();
    write_ledger_csv(out, all);
}

SpendSummary campaign_spend(std::span<const PayoutStatement> statements) {
    SpendSummary summary;
    for (const auto& s : statements) {
        if (!s.disbursement || s.disbursement->status != ReceiptStatus::Paid) continue;
        const Ugx paid = s.disbursement->amount;
        summary.total += paid;
        summary.fees += s.disbursement->fee;
        summary.per_agent[s.agent_id] += paid;
        if (s.amount_by_scheme.empty()) {
            summary.per_scheme[s.scheme_id] += paid;
        } else {
            for (const auto& [id, amount] : s.amount_by_scheme) summary.per_scheme[id] += amount;
        }
    }
    return summary;
}

void write_ledger_csv(std::ostream& out, std::span<const PayoutStatement> statements) {
    out << "agent_id,period_start,period_end,reports,amount,scheme,receipt_status\n";
    for (const auto& s : statements) {
        out << csv::join({s.agent_id, format_date(s.period.start), format_date(s.period.end),
                          std::to_string(s.reports_in_period), std::to_string(s.amount),
                          std::string(to_string(s.scheme_id)),
                          s.disbursement ? std::string(to_string(s.disbursement->status)) : std::string("Unpaid")})
            << '\n';
    }
}

}  // namespace cropsense::incentives
