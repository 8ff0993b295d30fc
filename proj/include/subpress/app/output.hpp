#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace subpress::app {

/// Writes to a sibling temporary file; commit() renames it over the target.
/// If the object is destroyed without commit() the temporary is removed and
/// the target is left untouched.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path target);
    ~AtomicFile();
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ofstream& stream() { return out_; }
    void commit();

    [[nodiscard]] const std::filesystem::path& temp_path() const noexcept { return temp_; }

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_atomic(const std::filesystem::path& target, std::string_view content);

/// Shortest-safe fixed format: 17 significant digits.
[[nodiscard]] std::string format_real(double v);

}  // namespace subpress::app
