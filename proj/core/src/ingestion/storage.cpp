#include "cropsense/ingestion.hpp"

#include <openssl/evp.h>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>

namespace cropsense::ingestion {

namespace fs = std::filesystem;

BlobStore::BlobStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

std::string BlobStore::ref_for(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw Error(Errc::IoError, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string ref = "sha256:";
    for (unsigned int i = 0; i < length; ++i) {
        ref.push_back(kHex[digest[i] >> 4]);
        ref.push_back(kHex[digest[i] & 0xF]);
    }
    return ref;
}

fs::path BlobStore::path_of(std::string_view ref) const {
    constexpr std::string_view prefix = "sha256:";
    if (ref.substr(0, prefix.size()) != prefix || ref.size() != prefix.size() + 64) {
        throw Error(Errc::ParseError, "not a blob ref: " + std::string(ref));
    }
    auto hex = ref.substr(prefix.size());
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            throw Error(Errc::ParseError, "not a blob ref: " + std::string(ref));
        }
    }
    return root_ / std::string(hex.substr(0, 2)) / std::string(hex);
}

std::string BlobStore::put(std::string_view bytes) {
    auto ref = ref_for(bytes);
    const auto path = path_of(ref);
    if (fs::exists(path)) return ref;
    fs::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(Errc::IoError, "cannot write blob " + tmp);
    }
    fs::rename(tmp, path);
    return ref;
}

bool BlobStore::contains(std::string_view ref) const { return fs::exists(path_of(ref)); }

std::optional<std::string> BlobStore::get(std::string_view ref) const {
    std::ifstream in(path_of(ref), std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

StoreDirectory::StoreDirectory(const fs::path& dir, ReportStore& store) : dir_(dir), store_(store) {
    fs::create_directories(dir_);
    const auto lock_path = (dir_ / "LOCK").string();
    lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (lock_fd_ < 0) throw Error(Errc::IoError, "cannot open " + lock_path + ": " + std::strerror(errno));
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw Error(Errc::StoreLocked, "store " + dir_.string() + " is in use by another process");
    }

    const auto file = reports_file(dir_);
    try {
        if (fs::exists(file)) {
            std::ifstream in(file);
            store_.load_jsonl(in);
        }
        log_.open(file, std::ios::app);
        if (!log_) throw Error(Errc::IoError, "cannot append to " + file.string());
    } catch (...) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw;
    }
    store_.set_append_log(&log_);
}

StoreDirectory::~StoreDirectory() {
    try {
        flush();
    } catch (...) {
        // the append log already holds every accepted report
    }
    store_.set_append_log(nullptr);
    log_.close();
    if (lock_fd_ >= 0) ::close(lock_fd_);
}

void StoreDirectory::flush() {
    store_.set_append_log(nullptr);
    log_.close();
    const auto file = reports_file(dir_);
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        store_.write_jsonl(out);
        if (!out) throw Error(Errc::IoError, "cannot write " + tmp);
    }
    fs::rename(tmp, file);
    log_.open(file, std::ios::app);
    store_.set_append_log(&log_);
}

}  // namespace cropsense::ingestion
