#pragma once

namespace jetad::detail {

template <class... Fs>
struct overloaded : Fs...
{
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

} // namespace jetad::detail
