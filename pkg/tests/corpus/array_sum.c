int table[8];

int fill_and_sum(int seed)
{
    int i = 0;
    while (i < 8) {
        table[i] = seed + i;
        i = i + 1;
    }
    int acc = 0;
    for (int j = 0; j < 8; j++) {
        acc += table[j];
    }
    return acc;
}
