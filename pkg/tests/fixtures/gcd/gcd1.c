#include <stdio.h>

int main(void) {
    int a = 252;
    int b = 105;
    int t;
    while (b != 0) {
        t = b;
        b = a % b;
        a = t;
    }
    printf("%d\n", a);
    return 0;
}
