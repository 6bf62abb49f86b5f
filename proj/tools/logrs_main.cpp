// Placeholder entry point; subcommands land once the library modules exist.
#include <cstdio>

int main() {
    std::puts("logrs: not yet wired");
    return 1;
}
