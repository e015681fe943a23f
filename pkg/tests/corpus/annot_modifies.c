int shared_state = 0;

void touch(int v) /*@ MODIFIES ⟨shared_state⟩ */
{
    shared_state = v;
}
