#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cropsense::registry {

/// Regional training station. Enum order is the fixed reporting order.
enum class Zardi { Arua, Bulindi, Lira, Rwebitaba, Soroti, Tororo, Wakiso };

inline constexpr std::array<Zardi, 7> kZardis{Zardi::Arua,   Zardi::Bulindi, Zardi::Lira,  Zardi::Rwebitaba,
                                               Zardi::Soroti, Zardi::Tororo,  Zardi::Wakiso};

std::string_view zardi_name(Zardi z) noexcept;
/// Sub-region label for a station ("West Nile", "Near West", ...).
std::string_view region_label(Zardi z) noexcept;
/// Accepts either the station name or the sub-region label, case-insensitively.
std::optional<Zardi> parse_zardi(std::string_view text);

enum class Gender { Male, Female };
enum class ProducerScale { Smallholder, MediumScale };
enum class AgeGroup { A20_30, A31_40, A41_50, A51_60 };
enum class AgentStatus { Selected, Waitlisted, Rejected, Withdrawn };

inline constexpr std::array<Gender, 2> kGenders{Gender::Male, Gender::Female};
inline constexpr std::array<AgeGroup, 4> kAgeGroups{AgeGroup::A20_30, AgeGroup::A31_40, AgeGroup::A41_50,
                                                     AgeGroup::A51_60};

std::string_view to_string(Gender g) noexcept;
std::string_view to_string(ProducerScale s) noexcept;
std::string_view to_string(AgeGroup g) noexcept;
std::string_view to_string(AgentStatus s) noexcept;
std::optional<Gender> parse_gender(std::string_view text);
std::optional<AgentStatus> parse_status(std::string_view text);

/// 20-30, 31-40, 41-50, 51-60. Ages outside [20, 60] have no group.
std::optional<AgeGroup> age_group_for(int age) noexcept;

/// Youth for the per-district composition target: 20 to 30 inclusive.
inline bool is_youth(int age) noexcept { return age >= 20 && age <= 30; }

struct CandidateProfile {
    std::string candidate_id;
    std::string name;
    Zardi region = Zardi::Arua;
    std::string district;
    Gender gender = Gender::Male;
    int age = 0;
    double acreage = 0.0;
    // Unset flags mean the field was never captured; verification refuses them.
    std::optional<bool> in_farmers_group;
    std::optional<bool> education_primary_or_above;
    std::optional<bool> owns_functional_phone;
    std::optional<bool> has_mobile_money;
    std::optional<bool> literate;
    std::optional<bool> has_charging_access;
    std::optional<bool> spouse_informed;
    std::optional<bool> has_id_or_lc_letter;
    ProducerScale producer_scale = ProducerScale::Smallholder;
};

enum class Criterion {
    AgeRange,
    GroupMembership,
    Education,
    FunctionalPhone,
    MobileMoney,
    Acreage,
    Literacy,
    ChargingAccess,
    SpouseInformed,
    IdOrLcLetter,
};

enum class ExceptionTag { MediumScaleProducer };

std::string_view to_string(Criterion c) noexcept;
std::string_view to_string(ExceptionTag t) noexcept;

struct EligibilityResult {
    bool eligible = false;
    std::vector<Criterion> failed_criteria;  // in Criterion enum order
    std::optional<ExceptionTag> exception_applied;
};

inline constexpr int kMinAge = 20;
inline constexpr int kMaxAge = 60;
inline constexpr double kMinAcreage = 0.5;
inline constexpr double kMaxSmallholderAcreage = 2.0;

/// Throws Error(MalformedProfile) when an id, region field, age, acreage or
/// any flag is missing or non-positive.
EligibilityResult check_eligibility(const CandidateProfile& candidate, bool allow_medium_scale);

struct DistrictTargets {
    int female = 2;
    int male = 2;
    int youth = 2;
};

struct RegionQuota {
    Zardi region = Zardi::Arua;
    int devices = 40;
    DistrictTargets per_district_targets;
};

/// Seven stations, 40 devices each.
std::vector<RegionQuota> default_quotas();

struct FarmerAgent {
    std::string agent_id;
    CandidateProfile profile;
    AgentStatus status = AgentStatus::Rejected;
    std::optional<std::string> device_id;
    std::string mobile_money_account;
    std::optional<AgeGroup> age_group;
    bool is_district_leader = false;
    std::optional<ExceptionTag> exception_applied;
    std::vector<Criterion> failed_criteria;
};

/// Surplus capacity moved from a station with too few eligible candidates to
/// one with a waiting list.
struct QuotaTransfer {
    Zardi from = Zardi::Arua;
    Zardi to = Zardi::Arua;
    int count = 0;

    friend bool operator==(const QuotaTransfer&, const QuotaTransfer&) = default;
};

struct RegionCounts {
    int selected = 0;
    int waitlisted = 0;
    int rejected = 0;
    int male = 0;    // selected only
    int female = 0;  // selected only
    int districts = 0;  // distinct districts among selected

    friend bool operator==(const RegionCounts&, const RegionCounts&) = default;
};

struct VerifiedRoster {
    std::vector<FarmerAgent> selected;
    std::vector<FarmerAgent> waitlist;  // promotion order
    std::vector<FarmerAgent> rejected;
    std::map<Zardi, RegionCounts> per_region;
    std::vector<QuotaTransfer> transfers;

    int total_districts() const;
};

struct VerifyOptions {
    bool allow_medium_scale = true;
};

/// Partitions candidates into selected / waitlist / rejected.
///
/// Within a station, eligible candidates are ordered by (district, candidate_id).
/// A first pass picks, per district, candidates that fill an unmet composition
/// target (female, male, youth); a second pass takes the rest in the same
/// order regardless of gender. The first `devices` candidates of that order are
/// selected and the remainder waitlisted. Stations left with spare capacity
/// then hand it, in station order, to the following stations (cyclically) that
/// still have waitlisted candidates.
///
/// Throws QuotaConflict for duplicate station quotas and ConfigInvalid when a
/// candidate's station has no quota.
VerifiedRoster verify_roster(std::span<const CandidateProfile> candidates, std::span<const RegionQuota> quotas,
                             const VerifyOptions& options = {});

struct DeviceAllocation {
    std::map<std::string, std::string> device_of;  // agent_id -> device_id
    std::map<Zardi, int> unassigned;               // per originating station
    int total_devices = 0;

    int assigned() const { return static_cast<int>(device_of.size()); }
    int unassigned_total() const { return total_devices - assigned(); }
};

/// Device ids are "<STATION>-<nnn>", numbered per station pool. A station's
/// capacity is its own pool adjusted by the roster's quota transfers;
/// transferred devices are drawn from the donor's pool.
DeviceAllocation allocate_devices(const VerifiedRoster& roster, std::span<const RegionQuota> quotas);

/// Writes device ids into the selected agents.
void apply_allocation(VerifiedRoster& roster, const DeviceAllocation& allocation);

/// Plurality winner of voter -> votee ballots. Ties go to the lexicographically
/// smallest agent id (byte order). Throws NoVotes on an empty ballot.
std::string elect_district_leader(std::string_view district, const std::map<std::string, std::string>& votes);

// ---------------------------------------------------------------------------
// Roster file formats

/// Header-named columns; booleans are "yes"/"no". Errors carry the line number.
std::vector<CandidateProfile> read_candidates_csv(std::istream& in);
void write_candidates_csv(std::ostream& out, std::span<const CandidateProfile> candidates);

/// {"quotas":[{"region":"Arua","devices":40,"targets":{"female":2,"male":2,"youth":2}}, ...]}
std::vector<RegionQuota> read_quotas_json(std::istream& in);
void write_quotas_json(std::ostream& out, std::span<const RegionQuota> quotas);

std::string agent_to_json_line(const FarmerAgent& agent);
FarmerAgent agent_from_json_line(std::string_view line);

/// Built from a candidate's eligibility outcome; status left to the caller.
FarmerAgent make_agent(const CandidateProfile& candidate, const EligibilityResult& eligibility);

// ---------------------------------------------------------------------------

/// Mutable registry of agents. Writers are serialized; readers share a lock and
/// see whole transactions only.
class Registry {
public:
    Registry() = default;
    explicit Registry(std::vector<FarmerAgent> agents);
    /// Selected, then waitlisted, then rejected agents.
    explicit Registry(const VerifiedRoster& roster);

    Registry(const Registry& other);
    Registry& operator=(const Registry& other);

    std::optional<FarmerAgent> find(std::string_view agent_id) const;
    std::vector<FarmerAgent> agents() const;
    std::vector<FarmerAgent> with_status(AgentStatus status) const;
    std::size_t size() const;

    /// Validates that every voter and votee is a Selected agent of `district`
    /// (InvalidVote otherwise), elects, and makes the winner the district's
    /// only leader.
    std::string elect_leader(std::string_view district, const std::map<std::string, std::string>& votes);

    /// Marks a Selected agent Withdrawn and promotes the first waitlisted agent
    /// of the same station, or of any station if that list is empty. The
    /// withdrawn device moves to the promoted agent.
    std::optional<std::string> withdraw_and_promote(std::string_view agent_id);

    void write_jsonl(std::ostream& out) const;
    static Registry read_jsonl(std::istream& in);

private:
    mutable std::shared_mutex mutex_;
    std::vector<FarmerAgent> agents_;
    std::map<std::string, std::size_t, std::less<>> index_;

    void rebuild_index();
};

// ---------------------------------------------------------------------------
// Reference data reproducing the published selection statistics.

struct StationStatistics {
    Zardi station;
    int districts;
    int selected;
    int male;
    int female;
};

/// Published per-station outcome of the 246-candidate verification exercise.
const std::array<StationStatistics, 7>& table1_statistics();

/// Deterministic 246-candidate roster whose verification against
/// default_quotas() reproduces table1_statistics().
std::vector<CandidateProfile> table1_candidates();

/// Approximate station coordinates (latitude, longitude).
std::pair<double, double> station_location(Zardi z) noexcept;

}  // namespace cropsense::registry
