#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contrastkit/backend.hpp"

namespace contrastkit::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Images travel as base64 PNG, so only values on the 8-bit grid survive a
// round trip unchanged.
std::string encode_image(const ImageBuffer& img);
ImageBuffer decode_image(std::string_view b64, int channels);

std::string encode_caption_request(const ImageBuffer& img);
ImageBuffer decode_caption_request(std::string_view body);
std::string encode_caption_response(const Prompt& p);
Prompt decode_caption_response(std::string_view body);

std::string encode_embed_request(const Prompt& p);
Prompt decode_embed_request(std::string_view body);
std::string encode_embed_response(double norm);
double decode_embed_response(std::string_view body);

std::string encode_edit_request(const EditRequest& req);
EditRequest decode_edit_request(std::string_view body);
std::string encode_edit_response(const ImageBuffer& img);
ImageBuffer decode_edit_response(std::string_view body);

std::string encode_identity(const BackendIdentity& id);
BackendIdentity decode_identity(std::string_view body);

struct ErrorBody {
    std::string code;
    std::string message;
};
std::string encode_error(const ErrorBody& e);
// Tolerates bodies that are not JSON; the raw text becomes the message.
ErrorBody decode_error(std::string_view body);

}  // namespace contrastkit::wire
