/* subtraction form */
#include <stdio.h>

int main() {
    int x = 252, y = 105;
    while (x != y) {
        if (x > y) x -= y;
        else y -= x;
    }
    printf("%d\n", x);
    return 0;
}
