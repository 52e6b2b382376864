#include "freiman/set_io.hpp"

#include <fstream>
#include <sstream>

namespace freiman {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

FiniteSet parse_set_text(std::string_view text, std::optional<GroupSpec> expected) {
    std::optional<GroupSpec> group;
    std::vector<Elem> elems;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (!group) {
            if (line.starts_with("group")) {
                group = GroupSpec::parse(line);
                if (expected && *expected != *group)
                    fail(ErrorCode::group_mismatch,
                         "file declares " + group->to_string() + " but " + expected->to_string() + " was requested");
                continue;
            }
            if (!expected) fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": missing group header");
            group = expected;
        }
        try {
            elems.push_back(group->parse_elem(line));
        } catch (const Error& e) {
            fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!group) {
        if (!expected) fail(ErrorCode::parse_error, "missing group header");
        group = expected;
    }
    return FiniteSet(*group, std::move(elems));
}

FiniteSet read_set_file(const std::filesystem::path& path, std::optional<GroupSpec> expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(ErrorCode::io_error, "failed reading " + path.string());
    return parse_set_text(buf.str(), expected);
}

std::string format_set_text(const FiniteSet& set) {
    std::string out = "group " + set.group().to_string() + "\n";
    for (const auto e : set) {
        out += set.group().format(e);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io_error, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) fail(ErrorCode::io_error, "failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorCode::io_error, "cannot move output into place at " + path.string());
    }
}

void write_set_file(const std::filesystem::path& path, const FiniteSet& set) { write_file_atomic(path, format_set_text(set)); }

}  // namespace freiman
