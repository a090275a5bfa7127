#include <fstream>
#include <sstream>
#include <system_error>

#include "efw/errors.hpp"
#include "efw/io.hpp"

#ifdef EFW_HAVE_CURL
#include <curl/curl.h>
#endif

namespace efw {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw ConfigError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ConfigError("cannot rename '" + tmp.string() + "': " + ec.message());
}

#ifdef EFW_HAVE_CURL
namespace {
std::size_t append_body(char* data, std::size_t size, std::size_t count, void* user) {
    static_cast<std::string*>(user)->append(data, size * count);
    return size * count;
}
}  // namespace

std::string fetch_url(const std::string& url) {
    CURL* handle = curl_easy_init();
    if (!handle) throw Error("fetch: curl initialization failed");
    std::string body;
    curl_easy_setopt(handle, CURLOPT_URL, url.c_str());
    curl_easy_setopt(handle, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(handle, CURLOPT_CONNECTTIMEOUT, 15L);
    curl_easy_setopt(handle, CURLOPT_TIMEOUT, 120L);
    curl_easy_setopt(handle, CURLOPT_WRITEFUNCTION, append_body);
    curl_easy_setopt(handle, CURLOPT_WRITEDATA, &body);
    const CURLcode rc = curl_easy_perform(handle);
    long status = 0;
    curl_easy_getinfo(handle, CURLINFO_RESPONSE_CODE, &status);
    curl_easy_cleanup(handle);
    if (rc != CURLE_OK) throw Error(std::string("fetch '") + url + "' failed: " + curl_easy_strerror(rc));
    if (status != 200) throw Error("fetch '" + url + "' returned HTTP " + std::to_string(status));
    return body;
}
#else
std::string fetch_url(const std::string& url) {
    throw Error("fetch '" + url + "' unavailable: built without libcurl");
}
#endif

}  // namespace efw
