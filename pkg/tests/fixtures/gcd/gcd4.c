#include <stdio.h>

#define FIRST 252
#define SECOND 105

int remainder_of(int n, int m) {
    return n % m;
}

int main(void) {
    int a, b, r;
    a = FIRST;
    b = SECOND;
    for (;;) {
        if (b == 0)
            break;
        r = remainder_of(a, b);
        a = b;
        b = r;
    }
    printf("%d\n", a);
    return 0;
}
