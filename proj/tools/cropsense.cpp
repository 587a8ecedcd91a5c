#include "cropsense/analytics.hpp"
#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"
#include "cropsense/evaluation.hpp"
#include "cropsense/http_endpoint.hpp"
#include "cropsense/incentives.hpp"
#include "cropsense/ingestion.hpp"
#include "cropsense/ops.hpp"
#include "cropsense/registry.hpp"
#include "cropsense/simulator.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace cropsense;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

/// Missing inputs are caller mistakes, reported with exit status 2.
fs::path require_file(const fs::path& path, const char* what) {
    if (!fs::is_regular_file(path)) throw Error(Errc::ConfigInvalid, std::string(what) + " not found: " + path.string());
    return path;
}

std::ifstream open_in(const fs::path& path, const char* what) {
    require_file(path, what);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + (dir / name).string());
    return out;
}

fs::path default_store() {
    const char* env = std::getenv("CROPSENSE_STORE");
    return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("./data/store");
}

fs::path registry_path(const fs::path& store, const std::string& flag) {
    return flag.empty() ? store / "registry.jsonl" : fs::path(flag);
}

std::shared_ptr<registry::Registry> load_registry(const fs::path& path, bool required) {
    if (!fs::exists(path)) {
        if (required) require_file(path, "registry");
        return nullptr;
    }
    auto in = open_in(path, "registry");
    return std::make_shared<registry::Registry>(registry::Registry::read_jsonl(in));
}

void load_store(ingestion::ReportStore& store, const fs::path& dir) {
    auto in = open_in(ingestion::StoreDirectory::reports_file(dir), "report store");
    store.load_jsonl(in);
}

void write_roster(const fs::path& out_dir, const registry::Registry& reg) {
    auto out = open_out(out_dir, "roster.jsonl");
    reg.write_jsonl(out);
}

// ---------------------------------------------------------------------------

struct RosterVerifyArgs {
    std::string in, quotas, out = "out";
    bool no_medium_scale = false;
};

void roster_verify(const RosterVerifyArgs& a) {
    auto cin = open_in(a.in, "candidate file");
    auto qin = open_in(a.quotas, "quota file");
    const auto candidates = registry::read_candidates_csv(cin);
    const auto quotas = registry::read_quotas_json(qin);
    registry::VerifyOptions options;
    options.allow_medium_scale = !a.no_medium_scale;
    auto roster = registry::verify_roster(candidates, quotas, options);
    const auto allocation = registry::allocate_devices(roster, quotas);
    registry::apply_allocation(roster, allocation);
    write_roster(a.out, registry::Registry(roster));

    auto summary = open_out(a.out, "roster_summary.csv");
    summary << "region,districts,selected,male,female,waitlisted,rejected\n";
    for (const auto& [z, c] : roster.per_region) {
        summary << registry::zardi_name(z) << ',' << c.districts << ',' << c.selected << ',' << c.male << ','
                << c.female << ',' << c.waitlisted << ',' << c.rejected << '\n';
    }
    auto transfers = open_out(a.out, "quota_transfers.csv");
    transfers << "from,to,count\n";
    for (const auto& t : roster.transfers) {
        transfers << registry::zardi_name(t.from) << ',' << registry::zardi_name(t.to) << ',' << t.count << '\n';
    }
    std::cout << "selected " << roster.selected.size() << ", waitlisted " << roster.waitlist.size() << ", rejected "
              << roster.rejected.size() << ", devices unassigned " << allocation.unassigned_total() << '\n';
}

void roster_fixture(const std::string& out_dir) {
    const auto candidates = registry::table1_candidates();
    const auto quotas = registry::default_quotas();
    auto c = open_out(out_dir, "candidates.csv");
    registry::write_candidates_csv(c, candidates);
    auto q = open_out(out_dir, "quotas.json");
    registry::write_quotas_json(q, quotas);
    std::cout << candidates.size() << " candidates\n";
}

struct RosterElectArgs {
    std::string registry, district, votes, out = "out";
};

void roster_elect(const RosterElectArgs& a) {
    auto reg = load_registry(a.registry, true);
    auto vin = open_in(a.votes, "ballot file");
    const auto table = csv::read(vin);
    const auto voter_col = table.column("voter");
    const auto votee_col = table.column("votee");
    if (!voter_col || !votee_col) throw Error(Errc::ParseError, "ballot CSV needs voter and votee columns");
    const auto voter = *voter_col;
    const auto votee = *votee_col;
    std::map<std::string, std::string> ballots;
    for (const auto& row : table.rows) {
        if (!ballots.emplace(row.fields[voter], row.fields[votee]).second) {
            throw Error(Errc::InvalidVote, "line " + std::to_string(row.line) + ": " + row.fields[voter] + " voted twice");
        }
    }
    const auto leader = reg->elect_leader(a.district, ballots);
    write_roster(a.out, *reg);
    std::cout << a.district << " leader: " << leader << '\n';
}

struct RosterPromoteArgs {
    std::string registry, withdraw, out = "out";
};

void roster_promote(const RosterPromoteArgs& a) {
    auto reg = load_registry(a.registry, true);
    const auto promoted = reg->withdraw_and_promote(a.withdraw);
    write_roster(a.out, *reg);
    std::cout << a.withdraw << " withdrawn; " << (promoted ? "promoted " + *promoted : std::string("waitlist empty"))
              << '\n';
}

// ---------------------------------------------------------------------------

struct ServeArgs {
    std::string store, registry, addr = "127.0.0.1:8080", blobs;
};

void serve(const ServeArgs& a) {
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    const auto colon = a.addr.rfind(':');
    if (colon == std::string::npos) throw Error(Errc::ConfigInvalid, "--addr must be HOST:PORT");
    const std::string host = a.addr.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(a.addr.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(Errc::ConfigInvalid, "bad port in --addr " + a.addr);
    }
    auto reg = load_registry(registry_path(dir, a.registry), true);
    fs::create_directories(dir);
    ingestion::ReportStore store(reg.get());
    ingestion::StoreDirectory directory(dir, store);
    std::unique_ptr<ingestion::BlobStore> blobs;
    if (!a.blobs.empty()) blobs = std::make_unique<ingestion::BlobStore>(a.blobs);
    ingestion::IngestionServer server(store, blobs.get());
    const int bound = server.bind(host, port);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start();
    std::cout << "listening on " << host << ':' << bound << " with " << store.size() << " reports" << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    server.stop();
    directory.flush();
    std::cout << "stopped with " << store.size() << " reports" << std::endl;
}

struct AnnotateArgs {
    std::string store, in;
};

void annotate(const AnnotateArgs& a) {
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    require_file(ingestion::StoreDirectory::reports_file(dir), "report store");
    auto in = open_in(a.in, "annotation file");
    const auto rows = ingestion::read_annotations_csv(in);
    ingestion::ReportStore store;
    ingestion::StoreDirectory directory(dir, store);
    const auto applied = ingestion::apply_annotations(store, rows);
    directory.flush();
    std::cout << applied << " annotations applied\n";
}

// ---------------------------------------------------------------------------

struct PayArgs {
    std::string store, registry, period, schedule, out = "out";
    bool disburse = false;
    long long float_balance = 0;
    double failure_rate = 0.0;
    unsigned long long seed = 1;
};

void pay_compute(const PayArgs& a) {
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    const Date monday = parse_iso_week(a.period);
    incentives::SchemeBook book = incentives::SchemeBook::reference_default();
    if (!a.schedule.empty()) {
        auto in = open_in(a.schedule, "scheme schedule");
        book = incentives::read_scheme_book_json(in);
    }
    auto reg = load_registry(registry_path(dir, a.registry), a.disburse);
    ingestion::ReportStore store(reg.get());
    load_store(store, dir);

    std::map<std::string, std::vector<incentives::PricedReport>> histories;
    for (const auto& r : store.query({})) histories[r.agent_id].push_back({r.ordinal, r.received_at});

    const auto period = incentives::week_period(monday);
    std::vector<incentives::PayoutStatement> statements;
    for (const auto& [agent, history] : histories) {
        auto s = incentives::compute_payout(agent, history, period, book);
        if (s.reports_in_period == 0 && s.amount == 0) continue;
        statements.push_back(std::move(s));
    }

    if (a.disburse) {
        incentives::SimulatedPayoutClient::Options options;
        options.float_balance = a.float_balance;
        options.failure_rate = a.failure_rate;
        options.seed = a.seed;
        incentives::SimulatedPayoutClient client(options);
        incentives::PayoutLedger ledger(book.transfer_fee());
        for (auto& s : statements) {
            if (s.amount <= 0) continue;
            const auto agent = reg->find(s.agent_id);
            if (!agent) throw Error(Errc::UnknownAgent, s.agent_id + " is not in the registry");
            s.disbursement = ledger.disburse(s, agent->mobile_money_account, client);
        }
        auto receipts = open_out(a.out, "receipts.csv");
        receipts << "idempotency_key,status,amount,fee,provider_txn_id,failure\n";
        for (const auto& s : statements) {
            if (!s.disbursement) continue;
            const auto& r = *s.disbursement;
            receipts << csv::join({r.idempotency_key, std::string(incentives::to_string(r.status)),
                                   std::to_string(r.amount), std::to_string(r.fee), r.provider_txn_id,
                                   r.failure ? std::string(to_string(*r.failure)) : std::string()})
                     << '\n';
        }
    }
    auto out = open_out(a.out, "statements.csv");
    incentives::write_ledger_csv(out, statements);
    incentives::Ugx total = 0;
    for (const auto& s : statements) total += s.amount;
    std::cout << statements.size() << " statements for " << a.period << ", total UGX " << total << '\n';
}

struct CallsArgs {
    std::string store, registry, out = "out";
    int operators = 6;
};

void calls_assign(const CallsArgs& a) {
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    auto reg = load_registry(registry_path(dir, a.registry), true);
    const auto assignments = ops::assign_calls(*reg, a.operators);
    auto out = open_out(a.out, "call_assignments.csv");
    ops::write_call_assignments_csv(out, assignments);
    for (const auto& c : assignments) std::cout << "operator " << c.operator_id << ": " << c.agent_ids.size() << '\n';
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string store, lexicon, rules, matrix, out = "out";
};

void write_eval_outputs(const fs::path& out_dir, const evaluation::ConfusionMatrix& matrix,
                        const std::vector<evaluation::ClassMetrics>& metrics) {
    auto m = open_out(out_dir, "confusion_matrix.csv");
    evaluation::write_matrix_csv(m, matrix);
    auto p = open_out(out_dir, "class_metrics.csv");
    evaluation::write_metrics_csv(p, metrics);
}

void eval_matrix(const EvalArgs& a) {
    if (!a.matrix.empty()) {
        auto in = open_in(a.matrix, "matrix file");
        const auto matrix = evaluation::read_matrix_csv(in);
        std::vector<evaluation::ClassMetrics> metrics;
        for (auto d : kDiagnoses) metrics.push_back(evaluation::precision_recall(matrix, d));
        write_eval_outputs(a.out, matrix, metrics);
        std::cout << "matrix total " << matrix.total() << '\n';
        return;
    }
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    auto lexicon = evaluation::KeywordLexicon::builtin();
    if (!a.lexicon.empty()) {
        auto in = open_in(a.lexicon, "lexicon");
        lexicon = evaluation::read_lexicon_json(in);
    }
    auto rules = evaluation::DiagnosisRules::builtin();
    if (!a.rules.empty()) {
        auto in = open_in(a.rules, "rule table");
        rules = evaluation::read_rules_json(in);
    }
    ingestion::ReportStore store;
    load_store(store, dir);
    const auto result = evaluation::evaluate_corpus(store, lexicon, rules);
    write_eval_outputs(a.out, result.matrix, result.metrics);
    auto c = open_out(a.out, "coverage.csv");
    c << "counted,available\n" << result.counted << ',' << result.available << '\n';
    std::cout << "coverage " << result.counted << '/' << result.available << '\n';
}

struct AnalyzeArgs {
    std::string store, registry, dimension, from, to, out = "out";
};

void analyze(const AnalyzeArgs& a) {
    const auto dimension = analytics::parse_dimension(a.dimension);
    if (!dimension) throw Error(Errc::ConfigInvalid, "unknown dimension '" + a.dimension + "'");
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    auto reg = load_registry(registry_path(dir, a.registry), false);
    ingestion::ReportStore store(reg.get());
    load_store(store, dir);
    ingestion::ReportFilter filter;
    if (!a.from.empty() || !a.to.empty()) {
        if (a.from.empty() || a.to.empty()) throw Error(Errc::ConfigInvalid, "--from and --to go together");
        filter.received = DateRange{parse_date(a.from), parse_date(a.to)};
    }
    const auto result = analytics::aggregate(store, *dimension, filter);
    auto out = open_out(a.out, "aggregate_" + std::string(analytics::to_string(*dimension)) + ".csv");
    analytics::write_aggregation_csv(out, result);
    if (*dimension == analytics::Dimension::Week && filter.received) {
        auto w = open_out(a.out, "weekly_series.csv");
        const auto series = analytics::weekly_series(store, *filter.received);
        analytics::write_weekly_csv(w, series);
    }
    for (const auto& b : result.buckets) std::printf("%-12s %8llu  %.3f\n", b.key.c_str(), static_cast<unsigned long long>(b.count), b.share);
}

struct DensityArgs {
    std::string store, bounds, out = "out";
    double cell = 0.1;
    bool clip = false;
};

void density(const DensityArgs& a) {
    analytics::DensityOptions options;
    options.cell_size = a.cell;
    options.clip = a.clip;
    if (!a.bounds.empty()) {
        analytics::Bounds b;
        char extra = 0;
        if (std::sscanf(a.bounds.c_str(), "%lf,%lf,%lf,%lf%c", &b.min_lat, &b.min_lon, &b.max_lat, &b.max_lon,
                        &extra) != 4) {
            throw Error(Errc::ConfigInvalid, "--bounds must be MIN_LAT,MIN_LON,MAX_LAT,MAX_LON");
        }
        options.bounds = b;
    }
    const fs::path dir = a.store.empty() ? default_store() : fs::path(a.store);
    ingestion::ReportStore store;
    load_store(store, dir);
    const auto grid = analytics::spatial_density(store, options);
    auto csv_out = open_out(a.out, "density.csv");
    analytics::write_density_csv(csv_out, grid);
    auto geo = open_out(a.out, "density.geojson");
    analytics::write_geojson(geo, grid);
    std::cout << grid.cells.size() << " cells, " << grid.total() << " reports, " << grid.overflow << " clipped\n";
}

struct SimulateArgs {
    std::string config, out = "out";
    int high_performers = -1;
};

void simulate(const SimulateArgs& a) {
    simulator::CampaignConfig config = simulator::CampaignConfig::reference_default();
    if (!a.config.empty()) {
        auto in = open_in(a.config, "campaign config");
        config = simulator::read_campaign_config_json(in);
    }
    const auto trace = a.high_performers >= 0 ? simulator::high_performer_scenario(config, a.high_performers)
                                              : simulator::simulate_campaign(config);
    simulator::write_trace(trace, config, a.out);
    std::cout << trace.total_reports() << " reports, UGX " << trace.total_paid() << " paid";
    if (trace.budget_exhausted_week) std::cout << ", budget exhausted in week " << *trace.budget_exhausted_week + 1;
    std::cout << '\n';
}

// ---------------------------------------------------------------------------

struct IssueLogArgs {
    std::string log, agent, week, category, note;
    bool escalate = false;
};

void issues_log(const IssueLogArgs& a) {
    ops::IssueLogEntry e;
    e.agent_id = a.agent;
    parse_iso_week(a.week);
    e.week = a.week;
    const auto category = ops::parse_issue_category(a.category);
    if (!category) throw Error(Errc::ConfigInvalid, "unknown category '" + a.category + "'");
    e.category = *category;
    e.note = a.note;
    e.escalated_to_engineering = a.escalate;
    const fs::path path(a.log);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot append to " + a.log);
    out << ops::issue_to_json_line(e) << '\n';
}

struct IssueReportArgs {
    std::string log, week, out = "out";
};

void issues_report(const IssueReportArgs& a) {
    parse_iso_week(a.week);
    auto in = open_in(a.log, "issue log");
    const auto log = ops::read_issue_log(in);
    const auto report = ops::weekly_issue_report(log, a.week);
    auto out = open_out(a.out, "issues_" + a.week + ".csv");
    ops::write_issue_report_csv(out, report);
    std::cout << report.total << " issues, " << report.open.size() << " open\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cropsense: crowdsourced crop disease surveillance campaigns"};
    app.require_subcommand(1);
    std::function<void()> action;

    // roster
    auto* roster = app.add_subcommand("roster", "Candidate verification and agent roster");
    roster->require_subcommand(1);
    RosterVerifyArgs rv;
    auto* verify = roster->add_subcommand("verify", "Verify candidates against station quotas");
    verify->add_option("--in", rv.in, "Candidate CSV")->required();
    verify->add_option("--quotas", rv.quotas, "Quota JSON")->required();
    verify->add_option("--out", rv.out, "Output directory");
    verify->add_flag("--no-medium-scale", rv.no_medium_scale, "Reject medium-scale producers");
    verify->callback([&] { action = [&] { roster_verify(rv); }; });

    std::string fixture_out = "out";
    auto* fixture = roster->add_subcommand("fixture", "Write the reference 246-candidate roster and quotas");
    fixture->add_option("--out", fixture_out, "Output directory");
    fixture->callback([&] { action = [&] { roster_fixture(fixture_out); }; });

    RosterElectArgs re;
    auto* elect = roster->add_subcommand("elect", "Elect a district leader from a voter,votee CSV");
    elect->add_option("--registry", re.registry, "Roster JSONL")->required();
    elect->add_option("--district", re.district, "District")->required();
    elect->add_option("--votes", re.votes, "Ballot CSV")->required();
    elect->add_option("--out", re.out, "Output directory");
    elect->callback([&] { action = [&] { roster_elect(re); }; });

    RosterPromoteArgs rp;
    auto* promote = roster->add_subcommand("promote", "Withdraw an agent and promote from the waitlist");
    promote->add_option("--registry", rp.registry, "Roster JSONL")->required();
    promote->add_option("--withdraw", rp.withdraw, "Agent id")->required();
    promote->add_option("--out", rp.out, "Output directory");
    promote->callback([&] { action = [&] { roster_promote(rp); }; });

    // serve / annotate
    ServeArgs sv;
    auto* serve_cmd = app.add_subcommand("serve", "Run the ingestion endpoint");
    serve_cmd->add_option("--store", sv.store, "Store directory (default $CROPSENSE_STORE)");
    serve_cmd->add_option("--registry", sv.registry, "Roster JSONL (default <store>/registry.jsonl)");
    serve_cmd->add_option("--addr", sv.addr, "HOST:PORT; port 0 picks a free port");
    serve_cmd->add_option("--blobs", sv.blobs, "Image blob directory");
    serve_cmd->callback([&] { action = [&] { serve(sv); }; });

    AnnotateArgs an;
    auto* annotate_cmd = app.add_subcommand("annotate", "Attach expert diagnoses from a report_id,diagnosis CSV");
    annotate_cmd->add_option("--store", an.store, "Store directory (default $CROPSENSE_STORE)");
    annotate_cmd->add_option("--in", an.in, "Annotation CSV")->required();
    annotate_cmd->callback([&] { action = [&] { annotate(an); }; });

    // pay
    auto* pay = app.add_subcommand("pay", "Payout statements");
    pay->require_subcommand(1);
    PayArgs pa;
    auto* compute = pay->add_subcommand("compute", "Compute one week's statements");
    compute->add_option("--store", pa.store, "Store directory (default $CROPSENSE_STORE)");
    compute->add_option("--registry", pa.registry, "Roster JSONL (default <store>/registry.jsonl)");
    compute->add_option("--period", pa.period, "ISO week, YYYY-Www")->required();
    compute->add_option("--schedule", pa.schedule, "Scheme schedule JSON");
    compute->add_option("--out", pa.out, "Output directory");
    compute->add_flag("--disburse", pa.disburse, "Send payouts through the simulated provider");
    compute->add_option("--float", pa.float_balance, "Provider float in UGX");
    compute->add_option("--failure-rate", pa.failure_rate, "Simulated provider failure rate");
    compute->add_option("--seed", pa.seed, "Simulated provider seed");
    compute->callback([&] { action = [&] { pay_compute(pa); }; });

    // calls
    auto* calls = app.add_subcommand("calls", "Call-centre workload");
    calls->require_subcommand(1);
    CallsArgs ca;
    auto* assign = calls->add_subcommand("assign", "Round-robin agents over operators");
    assign->add_option("--store", ca.store, "Store directory (default $CROPSENSE_STORE)");
    assign->add_option("--registry", ca.registry, "Roster JSONL (default <store>/registry.jsonl)");
    assign->add_option("--operators", ca.operators, "Number of operators");
    assign->add_option("--out", ca.out, "Output directory");
    assign->callback([&] { action = [&] { calls_assign(ca); }; });

    // eval
    auto* eval = app.add_subcommand("eval", "Farmer versus expert diagnosis");
    eval->require_subcommand(1);
    EvalArgs ea;
    auto* matrix = eval->add_subcommand("matrix", "Confusion matrix and per-class metrics");
    matrix->add_option("--store", ea.store, "Store directory (default $CROPSENSE_STORE)");
    matrix->add_option("--lexicon", ea.lexicon, "Keyword lexicon JSON");
    matrix->add_option("--rules", ea.rules, "Diagnosis rule JSON");
    matrix->add_option("--matrix", ea.matrix, "Use an existing matrix CSV instead of a store");
    matrix->add_option("--out", ea.out, "Output directory");
    matrix->callback([&] { action = [&] { eval_matrix(ea); }; });

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze", "Aggregate reports along one dimension");
    analyze_cmd->add_option("--store", aa.store, "Store directory (default $CROPSENSE_STORE)");
    analyze_cmd->add_option("--registry", aa.registry, "Roster JSONL (default <store>/registry.jsonl)");
    analyze_cmd->add_option("--dimension", aa.dimension, "region|gender|age_group|label|week")->required();
    analyze_cmd->add_option("--from", aa.from, "First receipt date, YYYY-MM-DD");
    analyze_cmd->add_option("--to", aa.to, "Last receipt date, YYYY-MM-DD");
    analyze_cmd->add_option("--out", aa.out, "Output directory");
    analyze_cmd->callback([&] { action = [&] { analyze(aa); }; });

    DensityArgs da;
    auto* density_cmd = app.add_subcommand("density", "Grid report density with GeoJSON export");
    density_cmd->add_option("--store", da.store, "Store directory (default $CROPSENSE_STORE)");
    density_cmd->add_option("--cell", da.cell, "Cell size in degrees");
    density_cmd->add_option("--bounds", da.bounds, "MIN_LAT,MIN_LON,MAX_LAT,MAX_LON");
    density_cmd->add_flag("--clip", da.clip, "Count outside reports as overflow");
    density_cmd->add_option("--out", da.out, "Output directory");
    density_cmd->callback([&] { action = [&] { density(da); }; });

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a synthetic campaign");
    simulate_cmd->add_option("--config", sa.config, "Campaign config JSON");
    simulate_cmd->add_option("--high-performers", sa.high_performers, "Agents reporting over 400 per week");
    simulate_cmd->add_option("--out", sa.out, "Output directory");
    simulate_cmd->callback([&] { action = [&] { simulate(sa); }; });

    // issues
    auto* issues = app.add_subcommand("issues", "Call-centre issue log");
    issues->require_subcommand(1);
    IssueLogArgs il;
    auto* log = issues->add_subcommand("log", "Append an issue");
    log->add_option("--log", il.log, "Issue log JSONL")->required();
    log->add_option("--agent", il.agent, "Agent id")->required();
    log->add_option("--week", il.week, "ISO week, YYYY-Www")->required();
    log->add_option("--category", il.category, "Technical|Network|Social|Schedule|PhoneUse|Other")->required();
    log->add_option("--note", il.note, "Free text");
    log->add_flag("--escalate", il.escalate, "Escalated to engineering");
    log->callback([&] { action = [&] { issues_log(il); }; });

    IssueReportArgs ir;
    auto* report = issues->add_subcommand("report", "Weekly category counts and open issues");
    report->add_option("--log", ir.log, "Issue log JSONL")->required();
    report->add_option("--week", ir.week, "ISO week, YYYY-Www")->required();
    report->add_option("--out", ir.out, "Output directory");
    report->callback([&] { action = [&] { issues_report(ir); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (action) action();
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_validation_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
