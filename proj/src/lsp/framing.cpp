#include "lspgen/lsp/framing.hpp"

#include <charconv>

#include "lspgen/lsp/protocol_error.hpp"

namespace lspgen::lsp {

std::string frame_message(std::string_view payload) {
    std::string out;
    out.reserve(payload.size() + 32);
    out += "Content-Length: ";
    out += std::to_string(payload.size());
    out += "\r\n\r\n";
    out += payload;
    return out;
}

void FrameReader::feed(std::string_view bytes) {
    buffer_.append(bytes.data(), bytes.size());
}

std::optional<std::string> FrameReader::next() {
    const auto header_end = buffer_.find("\r\n\r\n");
    if (header_end == std::string::npos) return std::nullopt;

    std::size_t content_length = 0;
    bool have_length = false;
    std::size_t pos = 0;
    while (pos < header_end) {
        auto line_end = buffer_.find("\r\n", pos);
        if (line_end == std::string::npos || line_end > header_end) line_end = header_end;
        std::string_view line{buffer_.data() + pos, line_end - pos};
        constexpr std::string_view kName = "Content-Length:";
        if (line.size() > kName.size() &&
            line.substr(0, kName.size()) == kName) {
            auto value = line.substr(kName.size());
            while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
            auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                             content_length);
            if (ec != std::errc{} || end != value.data() + value.size()) {
                throw ProtocolError("malformed Content-Length header", std::string(line));
            }
            have_length = true;
        }
        pos = line_end + 2;
    }
    if (!have_length) {
        throw ProtocolError("frame header missing Content-Length",
                            buffer_.substr(0, header_end));
    }

    const std::size_t body_begin = header_end + 4;
    if (buffer_.size() - body_begin < content_length) return std::nullopt;

    std::string payload = buffer_.substr(body_begin, content_length);
    buffer_.erase(0, body_begin + content_length);
    return payload;
}

}  // namespace lspgen::lsp
