#include <cstdio>

int main() {
    std::puts("yamabe cli placeholder");
    return 0;
}
