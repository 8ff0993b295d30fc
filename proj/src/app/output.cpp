#include "subpress/app/output.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <unistd.h>

namespace subpress::app {

namespace {

std::filesystem::path temp_name(const std::filesystem::path& target) {
    static std::atomic<unsigned> counter{0};
    return target.parent_path() /
           fmt::format(".{}.tmp.{}.{}", target.filename().string(), ::getpid(), counter.fetch_add(1));
}

}  // namespace

AtomicFile::AtomicFile(std::filesystem::path target) : target_(std::move(target)), temp_(temp_name(target_)) {
    if (!target_.parent_path().empty()) std::filesystem::create_directories(target_.parent_path());
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open " + temp_.string() + " for writing");
}

AtomicFile::~AtomicFile() {
    if (committed_) return;
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw std::runtime_error("write to " + temp_.string() + " failed");
    out_.close();
    std::filesystem::rename(temp_, target_);
    committed_ = true;
}

void write_atomic(const std::filesystem::path& target, std::string_view content) {
    AtomicFile f(target);
    f.stream() << content;
    f.commit();
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

}  // namespace subpress::app
