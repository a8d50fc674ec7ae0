#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace modmetrics {

// Minimal streaming JSON emitter for the canonical output format: compact
// separators, keys written in strictly sorted order by the caller, doubles
// at 12 significant digits. Hand-rolled so the bytes are fully under our
// control; byte-for-byte determinism of reports is a contract, not a nicety.
class JsonWriter {
public:
    void begin_object() { prefix(); out_ += '{'; stack_.push_back(false); }
    void end_object() { out_ += '}'; stack_.pop_back(); mark_value(); }
    void begin_array() { prefix(); out_ += '['; stack_.push_back(false); }
    void end_array() { out_ += ']'; stack_.pop_back(); mark_value(); }

    // Keys at one nesting level must be emitted in ascending byte order.
    void key(std::string_view k) {
        comma();
        quote(k);
        out_ += ':';
        pending_key_ = true;
    }

    void value(std::string_view s) { prefix(); quote(s); mark_value(); }
    void value(const char* s) { value(std::string_view(s)); }
    void value(bool b) { prefix(); out_ += b ? "true" : "false"; mark_value(); }
    void value(std::uint64_t n) { prefix(); out_ += std::to_string(n); mark_value(); }
    void value(std::int64_t n) { prefix(); out_ += std::to_string(n); mark_value(); }
    void value(std::uint32_t n) { value(static_cast<std::uint64_t>(n)); }
    void value(double d) {
        prefix();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", d);
        out_ += buf;
        mark_value();
    }

    const std::string& str() const { return out_; }
    std::string take() { return std::move(out_); }

private:
    void comma() {
        if (!stack_.empty() && stack_.back()) out_ += ',';
    }
    void prefix() {
        if (pending_key_) { pending_key_ = false; return; }
        comma();
    }
    void mark_value() {
        if (!stack_.empty()) stack_.back() = true;
    }
    void quote(std::string_view s) {
        out_ += '"';
        for (char ch : s) {
            switch (ch) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                        out_ += buf;
                    } else {
                        out_ += ch; // UTF-8 passes through untouched
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_; // true once the current scope holds an element
    bool pending_key_ = false;
};

} // namespace modmetrics
