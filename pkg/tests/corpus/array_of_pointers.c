const char *names[3] = { "a", "b", "c" };
int *slots[4];
int (*row)[8];

int count_names(void)
{
    return 3;
}
